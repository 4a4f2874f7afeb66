#include "vela/diagnostics.hpp"

#include <cmath>

#include "vela/norms.hpp"
#include "vela/spectral.hpp"

namespace vela {

EnergyReport energy_report(const State& s, const PressureLaw& law, double dissipation_cum,
                           double initial_total) {
  const int d = s.dim();
  const std::size_t np = s.grid().size();
  double kin = 0.0, elE = 0.0, elF = 0.0, pot = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    const double r = s.rho[p];
    double u2 = 0.0, e2 = 0.0, f2 = 0.0;
    for (int i = 0; i < d; ++i) {
      u2 += s.u[i][p] * s.u[i][p];
      for (int j = 0; j < d; ++j) {
        const double e = s.E(i, j)[p];
        const double f = e + (i == j ? 1.0 : 0.0);
        e2 += e * e;
        f2 += f * f;
      }
    }
    kin += r * u2;
    elE += r * e2;
    elF += r * f2;
    pot += law.potential(r);
  }
  const double dv = s.grid().cell_volume();
  EnergyReport e;
  e.kinetic = 0.5 * kin * dv;
  e.elastic_E = 0.5 * elE * dv;
  e.elastic_F = 0.5 * elF * dv;
  e.potential = pot * dv;
  e.dissipation_cum = dissipation_cum;
  e.balance_residual = e.total() + dissipation_cum - initial_total;
  return e;
}

double tr_integral(const State& s) {
  const std::size_t np = s.grid().size();
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double tr = 0.0;
    for (int i = 0; i < s.dim(); ++i) tr += s.E(i, i)[p];
    acc += s.rho[p] * tr;
  }
  return acc * s.grid().cell_volume();
}

double tr_pointwise_defect(const State& s, const StepConfig& cfg) {
  const ScalarField drho = continuity_rhs(s, cfg.mode, cfg.dealias);
  const TensorField dE = deformation_rhs(s, cfg.dealias);
  ScalarField rate(s.grid());
  for (std::size_t p = 0; p < s.grid().size(); ++p) {
    double tr = 0.0, dtr = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
      tr += s.E(i, i)[p];
      dtr += dE(i, i)[p];
    }
    rate[p] = drho[p] * tr + s.rho[p] * dtr;
  }
  return lq_norm(rate, 2.0);
}

VectorField sigma_from_density(const ScalarField& rho) {
  require_positive_density(rho);
  ScalarField lr(rho.grid());
  for (std::size_t p = 0; p < lr.grid().size(); ++p) lr[p] = std::log(rho[p]);
  return gradient(lr);
}

VectorField sigma_step(const VectorField& sigma, const State& s, const StepConfig& cfg) {
  return *advance(s, cfg, &sigma).sigma;
}

double sigma_consistency(const VectorField& sigma, const State& s) {
  return lq_norm(sigma - sigma_from_density(s.rho), 2.0);
}

ZFields compute_Z(const State& s, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("compute_Z: mu must be > 0");
  VectorField z1 = inverse_laplacian_meanzero(divergence(s.E));
  VectorField z = s.u;
  z.axpy(-1.0 / mu, z1);
  return {std::move(z1), std::move(z)};
}

namespace {

bool constraint_violated(const State& s) {
  return lq_norm(constraint_div_rhoFT(s), 2.0) > kConstraintWarnTol;
}

TensorField rho_EEt(const State& s) {
  const int d = s.dim();
  TensorField out(s.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < s.grid().size(); ++p) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += s.E(i, k)[p] * s.E(j, k)[p];
        out(i, j)[p] = s.rho[p] * acc;
      }
  return out;
}

VectorField rho_u_grad_u(const State& s) {
  const TensorField g = gradient(s.u);
  VectorField out(s.grid());
  for (int i = 0; i < s.dim(); ++i)
    for (std::size_t p = 0; p < s.grid().size(); ++p) {
      double acc = 0.0;
      for (int k = 0; k < s.dim(); ++k) acc += s.u[k][p] * g(i, k)[p];
      out[i][p] = s.rho[p] * acc;
    }
  return out;
}

ScalarField total_pressure(const State& s, const MomentumRhs& m, const PressureLaw& law) {
  ScalarField p = pressure_field(s.rho, law);
  p += m.q;
  return p;
}

}  // namespace

IdentityResidual z_parabolic_residual(const State& s, const StepConfig& cfg) {
  IdentityResidual out;
  out.constraint_warning = constraint_violated(s);
  const double mu = cfg.mu;
  const Grid& grid = s.grid();
  const std::size_t np = grid.size();

  const MomentumRhs m = momentum_rhs_detail(s, cfg);
  const TensorField dEdt = deformation_rhs(s, cfg.dealias);
  const TensorField gu = gradient(s.u);

  // d_t Z = d_t u - (1/mu) lap^-1 div(d_t E)
  VectorField dZdt = m.dudt;
  dZdt.axpy(-1.0 / mu, inverse_laplacian_meanzero(divergence(dEdt)));
  const ZFields z = compute_Z(s, mu);
  VectorField defect = dZdt;
  defect.axpy(-mu, laplacian(z.Z));

  // F1 = -rho (u.grad)u - grad(P + q) + div((rho-1)E) + div(rho E E^T) + (1-rho) d_t u
  VectorField f1 = rho_u_grad_u(s);
  f1 *= -1.0;
  f1 -= gradient(total_pressure(s, m, cfg.law));
  {
    ScalarField rm1 = s.rho;
    for (double& x : rm1.values()) x -= 1.0;
    f1 += divergence(pointwise_scale(rm1, s.E));
    f1 += divergence(rho_EEt(s));
    for (double& x : rm1.values()) x = -x;
    f1 += pointwise_scale(rm1, m.dudt);
  }
  // F2 = -(1/mu)(u - mean u) + (1/mu) lap^-1 div(grad u E - (u.grad)E)
  VectorField f2(grid);
  {
    TensorField stretch = dEdt;
    stretch -= gu;
    f2 = inverse_laplacian_meanzero(divergence(stretch));
    for (int i = 0; i < s.dim(); ++i) {
      const double ubar = mean(s.u[i]);
      for (std::size_t p = 0; p < np; ++p) f2[i][p] -= s.u[i][p] - ubar;
    }
    f2 *= 1.0 / mu;
  }
  defect -= f1;
  defect += f2;
  out.l2 = lq_norm(defect, 2.0);
  return out;
}

IdentityResidual pressure_poisson_residual(const State& s, const MomentumRhs& m, const PressureLaw& law) {
  IdentityResidual out;
  out.constraint_warning = constraint_violated(s);
  // lap(P + q) + lap rho = lap(P + q + rho)
  ScalarField defect = total_pressure(s, m, law);
  defect += s.rho;
  defect = laplacian(std::move(defect));
  defect -= divergence(divergence(rho_EEt(s)));
  defect += divergence(rho_u_grad_u(s));
  {
    ScalarField rm1 = s.rho;
    for (double& x : rm1.values()) x -= 1.0;
    defect += divergence(pointwise_scale(rm1, m.dudt));
  }
  out.l2 = lq_norm(defect, 2.0);
  return out;
}

IdentityResidual pressure_poisson_residual(const State& s, const StepConfig& cfg) {
  return pressure_poisson_residual(s, momentum_rhs_detail(s, cfg), cfg.law);
}

TrackedNorms tracked_norms(const State& s, double q) {
  TrackedNorms n;
  n.u_l2 = lq_norm(s.u, 2.0);
  n.u_lq = lq_norm(s.u, q);
  n.u_w1q = w1q_norm(s.u, q);
  n.u_h1semi = std::sqrt(h1_seminorm_sq(s.u));
  ScalarField rm1 = s.rho;
  for (double& x : rm1.values()) x -= 1.0;
  n.rho_m1_l2 = lq_norm(rm1, 2.0);
  n.rho_m1_lq = lq_norm(rm1, q);
  n.rho_m1_w1q = w1q_norm(rm1, q);
  n.E_l2 = lq_norm(s.E, 2.0);
  n.E_lq = lq_norm(s.E, q);
  n.E_w1q = w1q_norm(s.E, q);
  return n;
}

DiagnosticsReport make_report(const State& s, const VectorField* sigma, const LedgerAccumulators& acc,
                              const StepConfig& cfg, double q_norm) {
  DiagnosticsReport r;
  r.time = s.t;
  r.energy = energy_report(s, cfg.law, acc.dissipation_cum, acc.initial_energy);
  r.constraints = constraint_report(s);
  r.tr_integral = tr_integral(s);
  r.sigma_consistency_l2 = sigma != nullptr ? sigma_consistency(*sigma, s) : 0.0;
  const MomentumRhs m = momentum_rhs_detail(s, cfg);
  r.pressure_poisson_residual_l2 = pressure_poisson_residual(s, m, cfg.law).l2;
  r.z_residual_l2 = z_parabolic_residual(s, cfg).l2;
  r.norms = tracked_norms(s, q_norm);
  r.rho_min = s.rho_min();
  r.rho_max = s.rho_max();
  r.cfl = cfl_number(s, cfg.dt);
  return r;
}

}  // namespace vela
