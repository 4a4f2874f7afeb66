#include "vela/run.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "vela/checkpoint.hpp"
#include "vela/errors.hpp"
#include "vela/initial.hpp"
#include "vela/mms.hpp"

namespace vela {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "t",           "kinetic",         "elastic_E",  "elastic_F",          "potential",
      "dissipation_cum", "energy_balance_residual", "div_rhoFT_l2", "curl_compat_l2", "tr_integral",
      "sigma_consistency_l2", "z_residual_l2", "pressure_poisson_residual_l2", "u_l2", "u_lq",
      "u_w1q",       "u_h1semi",        "rho_m1_l2",  "rho_m1_lq",          "rho_m1_w1q",
      "E_l2",        "E_lq",            "E_w1q",      "rho_min",            "rho_max",
      "cfl"};
  return cols;
}

std::string csv_header() {
  std::string h;
  for (const auto& c : csv_columns()) h += c + ",";
  return h + "status";
}

namespace {

std::vector<double> row_values(const DiagnosticsReport& r) {
  const auto& e = r.energy;
  const auto& n = r.norms;
  return {r.time,        e.kinetic,     e.elastic_E,   e.elastic_F,   e.potential,   e.dissipation_cum,
          e.balance_residual, r.constraints.div_rhoFT_l2, r.constraints.curl_compat_l2, r.tr_integral,
          r.sigma_consistency_l2, r.z_residual_l2, r.pressure_poisson_residual_l2, n.u_l2, n.u_lq, n.u_w1q,
          n.u_h1semi,    n.rho_m1_l2,   n.rho_m1_lq,   n.rho_m1_w1q,  n.E_l2,        n.E_lq,
          n.E_w1q,       r.rho_min,     r.rho_max,     r.cfl};
}

std::string format_values(const std::vector<double>& v, const std::string& status) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (double x : v) os << x << ",";
  os << status;
  return os.str();
}

std::string failure_row(double t, const std::string& status) {
  std::vector<double> v(csv_columns().size(), std::numeric_limits<double>::quiet_NaN());
  v[0] = t;
  return format_values(v, status);
}

}  // namespace

std::string csv_row(const DiagnosticsReport& r, const std::string& status) {
  return format_values(row_values(r), status);
}

State initial_state(const RunConfig& cfg) {
  if (cfg.init == InitKind::checkpoint) return read_checkpoint(cfg.checkpoint_in, cfg.dim).state;
  const Grid grid = Grid::make(cfg.dim, cfg.n, cfg.length);
  switch (cfg.init) {
    case InitKind::equilibrium: return equilibrium_state(grid);
    case InitKind::taylor_green_perturbed: return taylor_green_perturbed(grid, cfg.delta, cfg.seed, cfg.compatible);
    case InitKind::constraint_compatible: return constraint_compatible_state(grid, cfg.delta, cfg.seed);
    case InitKind::manufactured: return manufactured_fields(standard_spec(cfg.mode), grid, 0.0).state;
    case InitKind::checkpoint: break;
  }
  return equilibrium_state(grid);
}

int run_simulation(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
  StepConfig step = cfg.step_config();
  if (cfg.init == InitKind::manufactured) step = forced_config(standard_spec(cfg.mode), step);

  State s = initial_state(cfg);
  std::optional<VectorField> sigma;
  if (s.rho_min() > 0.0) sigma = sigma_from_density(s.rho);

  std::ofstream file;
  std::ostream* csv = &out;
  if (cfg.csv != "-") {
    file.open(cfg.csv, std::ios::trunc);
    if (!file) {
      err << "error: cannot open csv '" << cfg.csv << "'\n";
      return kExitConfig;
    }
    csv = &file;
  }
  *csv << csv_header() << "\n";

  LedgerAccumulators acc;
  acc.initial_energy = energy_report(s, step.law, 0.0, 0.0).total();
  const double t0 = s.t;
  const long steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
  bool warned = false;
  int code = kExitOk;

  auto emit = [&](const std::string& status) {
    try {
      *csv << csv_row(make_report(s, sigma ? &*sigma : nullptr, acc, step, cfg.q_norm), status) << "\n";
    } catch (const NumericalAbort& e) {
      *csv << failure_row(s.t, status == "ok" ? NumericalAbort::label(e.reason()) : status) << "\n";
    }
  };

  try {
    emit("ok");
    for (long k = 1; k <= steps; ++k) {
      StepOutput o = advance(s, step, sigma ? &*sigma : nullptr);
      if (o.cfl > 0.5 && !warned) {
        err << "warning: CFL number " << o.cfl << " exceeds 0.5 at t = " << s.t << "\n";
        warned = true;
      }
      acc.dissipation_cum += o.dissipation;
      s = std::move(o.state);
      s.t = t0 + static_cast<double>(k) * cfg.dt;
      sigma = std::move(o.sigma);
      if (k % cfg.output_every == 0 || k == steps) emit("ok");
    }
  } catch (const NumericalAbort& e) {
    err << "error: " << e.what() << " at t = " << s.t << "\n";
    emit(NumericalAbort::label(e.reason()));
    code = kExitAbort;
  }
  csv->flush();
  if (!cfg.checkpoint_out.empty()) {
    try {
      write_checkpoint({s, cfg.gamma, cfg.mu, cfg.mode}, cfg.checkpoint_out);
    } catch (const CheckpointError& e) {
      err << "error: " << e.what() << "\n";
      if (code == kExitOk) code = kExitConfig;
    }
  }
  return code;
}

int check_identities(const RunConfig& cfg, std::ostream& out) {
  const State s = initial_state(cfg);
  StepConfig step = cfg.step_config();
  bool ok = true;
  auto line = [&](const std::string& name, double value, double tol) {
    const bool pass = std::abs(value) <= tol;
    ok = ok && pass;
    out << std::left << std::setw(32) << name << std::scientific << std::setprecision(6) << value
        << "  tol " << tol << "  " << (pass ? "PASS" : "FAIL") << "\n";
  };
  auto info = [&](const std::string& name, double value) {
    out << std::left << std::setw(32) << name << std::scientific << std::setprecision(6) << value << "  INFO\n";
  };

  const ConstraintReport c = constraint_report(s);
  line("div_rhoFT_l2", c.div_rhoFT_l2, cfg.tol.constraint);
  line("curl_compat_l2", c.curl_compat_l2, cfg.tol.curl);
  line("grad_rho_identity_l2", c.grad_rho_identity_l2, cfg.tol.grad_rho);
  line("force_equivalence_l2", c.force_equivalence_l2, cfg.tol.force);
  try {
    line("z_residual_l2", z_parabolic_residual(s, step).l2, cfg.tol.z);
    if (step.mode == Mode::incompressible)
      line("pressure_poisson_residual_l2", pressure_poisson_residual(s, step).l2, cfg.tol.pressure_poisson);
    else
      info("pressure_poisson_residual_l2", pressure_poisson_residual(s, step).l2);
  } catch (const NumericalAbort& e) {
    out << "identity evaluation aborted: " << e.what() << "  FAIL\n";
    ok = false;
  }
  info("tr_integral", tr_integral(s));
  try {
    info("tr_pointwise_defect_l2", tr_pointwise_defect(s, step));
  } catch (const NumericalAbort&) {
  }
  info("rho_detF_deviation_l1", rho_detF_deviation(s));
  return ok ? kExitOk : kExitCheckFailed;
}

int inspect_checkpoint(const std::string& path, std::ostream& out) {
  const Checkpoint c = read_checkpoint(path);
  const State& s = c.state;
  out << std::setprecision(17);
  out << "version " << kCheckpointVersion << "\n"
      << "dim " << s.dim() << "\n"
      << "n " << s.grid().n() << "\n"
      << "length " << s.grid().length() << "\n"
      << "t " << s.t << "\n"
      << "gamma " << c.gamma << "\n"
      << "mu " << c.mu << "\n"
      << "mode " << (c.mode == Mode::incompressible ? "incompressible" : "compressible") << "\n"
      << "rho_min " << s.rho_min() << "\n"
      << "rho_max " << s.rho_max() << "\n"
      << "finite " << (s.all_finite() ? "yes" : "no") << "\n";
  return kExitOk;
}

int run_mms(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
  StudyConfig study;
  study.step = cfg.step_config();
  study.length = cfg.length;
  study.t_end = cfg.mms_t_end;
  study.dts = cfg.mms_dts;
  study.ns = cfg.mms_ns;
  const ConvergenceReport r = convergence_study(standard_spec(cfg.mode), study);

  std::ofstream file;
  std::ostream* csv = &out;
  if (cfg.csv != "-") {
    file.open(cfg.csv, std::ios::trunc);
    if (!file) {
      err << "error: cannot open csv '" << cfg.csv << "'\n";
      return kExitConfig;
    }
    csv = &file;
  }
  *csv << std::setprecision(17) << "kind,n,dt,err_rho,err_u,err_E\n";
  for (std::size_t i = 0; i < r.dts.size(); ++i) {
    const auto& e = r.temporal_errors[i];
    *csv << "temporal," << r.ns.back() << "," << r.dts[i] << "," << e.rho << "," << e.u << "," << e.E << "\n";
  }
  for (std::size_t i = 0; i < r.ns.size(); ++i) {
    const auto& e = r.spatial_errors[i];
    *csv << "spatial," << r.ns[i] << "," << r.dts.back() << "," << e.rho << "," << e.u << "," << e.E << "\n";
  }
  *csv << "order,," << "," << r.temporal_order.rho << "," << r.temporal_order.u << "," << r.temporal_order.E << "\n";
  return kExitOk;
}

}  // namespace vela
