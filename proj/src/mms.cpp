#include "vela/mms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vela/errors.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"

namespace vela {

namespace {

void check_modes(const std::vector<FourierMode>& modes, int dim, int components, const char* name) {
  for (const auto& m : modes) {
    if (static_cast<int>(m.amplitude.size()) != components)
      throw std::invalid_argument(std::string("manufactured spec: ") + name + " mode has wrong amplitude size");
    if (dim == 2 && m.k[2] != 0)
      throw std::invalid_argument(std::string("manufactured spec: ") + name + " mode has a z wavenumber in 2-D");
    for (double a : m.amplitude)
      if (!std::isfinite(a)) throw std::invalid_argument("manufactured spec: non-finite amplitude");
  }
}

// Amplitude with the component along k removed.
std::vector<double> solenoidal(const FourierMode& m, int dim) {
  double kk = 0.0, ka = 0.0;
  for (int a = 0; a < dim; ++a) {
    kk += m.k[a] * m.k[a];
    ka += m.k[a] * m.amplitude[a];
  }
  std::vector<double> out = m.amplitude;
  if (kk > 0.0)
    for (int a = 0; a < dim; ++a) out[a] -= ka / kk * m.k[a];
  return out;
}

void add_modes(const std::vector<FourierMode>& modes, bool project, double eps, double t,
               std::vector<Array>& values, std::vector<Array>& rates, const Grid& grid) {
  const double k0 = grid.k0();
  const int d = grid.dim();
  const int cutoff = dealias_cutoff(grid);
  for (const auto& m : modes) {
    for (int a = 0; a < d; ++a)
      if (std::abs(m.k[a]) > cutoff)
        throw std::invalid_argument("manufactured_fields: mode above the dealias cutoff");
    const std::vector<double> amp = project ? solenoidal(m, d) : m.amplitude;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      double ph = m.phase + m.omega * t;
      for (int a = 0; a < d; ++a) ph += k0 * m.k[a] * grid.coordinate(p, a);
      const double c = std::cos(ph), s = std::sin(ph);
      for (std::size_t comp = 0; comp < amp.size(); ++comp) {
        values[comp][p] += eps * amp[comp] * c;
        rates[comp][p] -= eps * amp[comp] * m.omega * s;
      }
    }
  }
}

double bound(const std::vector<FourierMode>& modes) {
  double b = 0.0;
  for (const auto& m : modes) b += std::abs(m.amplitude[0]);
  return b;
}

}  // namespace

void ManufacturedSpec::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("manufactured spec: dim must be 2 or 3");
  if (!(eps >= 0.0)) throw std::invalid_argument("manufactured spec: eps must be >= 0");
  check_modes(rho, dim, 1, "rho");
  check_modes(u, dim, dim, "u");
  check_modes(E, dim, dim * dim, "E");
  if (1.0 - eps * bound(rho) < 0.5)
    throw std::invalid_argument("manufactured spec: density may fall below 0.5");
}

ManufacturedSpec standard_spec(Mode mode) {
  ManufacturedSpec s;
  s.dim = 2;
  s.mode = mode;
  s.eps = 1e-2;
  s.rho = {{{1, 0, 0}, {1.0}, 0.3, 1.0}, {{0, 1, 0}, {0.7}, 1.1, 1.0}, {{1, 1, 0}, {0.5}, -0.4, 1.0}};
  s.u = {{{1, 0, 0}, {0.2, 1.0}, 0.5, 1.0},
         {{0, 1, 0}, {0.8, -0.1}, -1.2, 1.0},
         {{1, -1, 0}, {0.6, 0.6}, 2.0, 1.0}};
  s.E = {{{1, 0, 0}, {0.5, -0.3, 0.2, 0.4}, 0.1, 1.0},
         {{0, 1, 0}, {-0.2, 0.6, 0.3, -0.5}, 0.9, 1.0},
         {{1, 1, 0}, {0.4, 0.1, -0.6, 0.3}, -0.7, 1.0}};
  return s;
}

ManufacturedFields manufactured_fields(const ManufacturedSpec& spec, const Grid& grid, double t) {
  spec.validate();
  if (grid.dim() != spec.dim) throw std::invalid_argument("manufactured_fields: grid dimension mismatch");
  ManufacturedFields f{State(grid), TimeDerivatives(grid)};
  f.state.t = t;
  add_modes(spec.rho, false, spec.eps, t, f.state.rho.comps(), f.derivatives.rho.comps(), grid);
  add_modes(spec.u, spec.mode == Mode::incompressible, spec.eps, t, f.state.u.comps(), f.derivatives.u.comps(),
            grid);
  add_modes(spec.E, false, spec.eps, t, f.state.E.comps(), f.derivatives.E.comps(), grid);
  return f;
}

SystemResidual manufactured_forcing(const ManufacturedSpec& spec, const Grid& grid, double t,
                                    const StepConfig& cfg) {
  const ManufacturedFields f = manufactured_fields(spec, grid, t);
  ResidualOptions opt;
  opt.mu = cfg.mu;
  opt.law = cfg.law;
  return residual(f.state, f.derivatives, opt);
}

StepConfig forced_config(const ManufacturedSpec& spec, StepConfig cfg) {
  cfg.mode = spec.mode;
  const StepConfig base = cfg;
  cfg.forcing = [spec, base](const Grid& grid, double t) { return manufactured_forcing(spec, grid, t, base); };
  return cfg;
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fitted_order: need >= 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

FieldErrors errors_against(const State& s, const State& exact) {
  return {lq_norm(s.rho - exact.rho, 2.0), lq_norm(s.u - exact.u, 2.0), lq_norm(s.E - exact.E, 2.0)};
}

std::string coordinates(int n, double dt) {
  std::ostringstream os;
  os << "n=" << n << " dt=" << dt;
  return os.str();
}

}  // namespace

ConvergenceReport convergence_study(const ManufacturedSpec& spec, const StudyConfig& study) {
  if (study.dts.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 dt values");
  if (study.ns.size() < 2) throw std::invalid_argument("convergence_study: need at least 2 n values");
  spec.validate();
  const StepConfig cfg = forced_config(spec, study.step);

  ConvergenceReport rep;
  rep.dts = study.dts;
  rep.ns = study.ns;

  const int n_time = study.ns.back();
  const Grid tgrid = Grid::make(spec.dim, n_time, study.length);
  const State exact_end = manufactured_fields(spec, tgrid, study.t_end).state;
  for (double dt : study.dts) {
    const long steps = std::lround(study.t_end / dt);
    if (steps < 1 || std::abs(steps * dt - study.t_end) > 1e-9 * study.t_end)
      throw std::invalid_argument("convergence_study: t_end must be a multiple of every dt (" +
                                  coordinates(n_time, dt) + ")");
    StepConfig c = cfg;
    c.dt = dt;
    State s = manufactured_fields(spec, tgrid, 0.0).state;
    try {
      for (long i = 0; i < steps; ++i) {
        s = step(s, c);
        s.t = (i + 1) * dt;
      }
    } catch (const NumericalAbort& e) {
      throw NumericalAbort(e.reason(), coordinates(n_time, dt) + ": " + e.what());
    }
    rep.temporal_errors.push_back(errors_against(s, exact_end));
  }

  for (int n : study.ns) {
    const Grid g = Grid::make(spec.dim, n, study.length);
    const ManufacturedFields f = manufactured_fields(spec, g, study.t_end);
    StepConfig c = cfg;
    c.dt = study.dts.back();
    const SystemResidual forcing = c.forcing(g, study.t_end);
    ScalarField drho = continuity_rhs(f.state, c.mode, c.dealias);
    drho += forcing.continuity;
    TensorField dE = deformation_rhs(f.state, c.dealias);
    dE += forcing.deformation;
    VectorField du(g);
    try {
      du = momentum_rhs_detail(f.state, c, &forcing).dudt;
    } catch (const NumericalAbort& e) {
      throw NumericalAbort(e.reason(), coordinates(n, c.dt) + ": " + e.what());
    }
    rep.spatial_errors.push_back({lq_norm(drho - f.derivatives.rho, 2.0), lq_norm(du - f.derivatives.u, 2.0),
                                  lq_norm(dE - f.derivatives.E, 2.0)});
  }

  std::vector<double> er, eu, eE;
  for (const auto& e : rep.temporal_errors) {
    er.push_back(e.rho);
    eu.push_back(e.u);
    eE.push_back(e.E);
  }
  rep.temporal_order = {fitted_order(study.dts, er), fitted_order(study.dts, eu), fitted_order(study.dts, eE)};
  return rep;
}

}  // namespace vela
