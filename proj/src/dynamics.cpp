#include "vela/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vela/errors.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"

namespace vela {

namespace {

template <int Rank>
Field<Rank> maybe_dealias(Field<Rank> f, bool on) {
  return on ? dealias(std::move(f)) : f;
}

// (u . grad) u, with g = grad u
VectorField advect_vector(const VectorField& u, const TensorField& g) {
  const int d = u.dim();
  const std::size_t np = u.grid().size();
  VectorField out(u.grid());
  for (int i = 0; i < d; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += u[k][p] * g(i, k)[p];
      out[i][p] = acc;
    }
  return out;
}

VectorField heat_propagate(const VectorField& u, double nu_dt) {
  const Grid& grid = u.grid();
  const ModeTable& m = modes(grid);
  const double k0sq = grid.k0() * grid.k0();
  VectorField out(grid);
  for (int i = 0; i < u.dim(); ++i) {
    Spectrum uh = forward(grid, u[i]);
    for (std::size_t c = 0; c < uh.size(); ++c) uh[c] *= std::exp(-nu_dt * k0sq * m.kd_sq[c]);
    out[i] = inverse(grid, uh);
  }
  return out;
}

double l2(const Array& a, const Grid& g) { return lq_norm(g, {a}, 2.0); }

}  // namespace

void StepConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("step config: dt must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("step config: mu must be > 0");
  if (!(pressure_tol > 0.0)) throw std::invalid_argument("step config: pressure_tol must be > 0");
  if (pressure_max_iter <= 0) throw std::invalid_argument("step config: pressure_max_iter must be > 0");
  PressureLaw::make(law.A, law.gamma);
}

ScalarField continuity_rhs(const State& s, Mode mode, bool dealias_on) {
  const std::size_t np = s.grid().size();
  ScalarField out(s.grid());
  if (mode == Mode::incompressible) {
    const VectorField grho = gradient(s.rho);
    for (std::size_t p = 0; p < np; ++p) {
      double acc = 0.0;
      for (int k = 0; k < s.dim(); ++k) acc += s.u[k][p] * grho[k][p];
      out[p] = -acc;
    }
    return maybe_dealias(std::move(out), dealias_on);
  }
  VectorField flux = pointwise_scale(s.rho, s.u);
  flux = maybe_dealias(std::move(flux), dealias_on);
  out = divergence(flux);
  out *= -1.0;
  return out;
}

TensorField deformation_rhs(const State& s, bool dealias_on) {
  const int d = s.dim();
  const std::size_t np = s.grid().size();
  const TensorField gu = gradient(s.u);
  TensorField nonlinear(s.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto dEij = partials(s.grid(), s.E(i, j));
      Array& out = nonlinear(i, j);
      for (std::size_t p = 0; p < np; ++p) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += gu(i, k)[p] * s.E(k, j)[p] - s.u[k][p] * dEij[k][p];
        out[p] = acc;
      }
    }
  nonlinear = maybe_dealias(std::move(nonlinear), dealias_on);
  nonlinear += gu;
  return nonlinear;
}

PressureSolution pressure_solve(const State& s, const VectorField& w, const StepConfig& cfg) {
  require_positive_density(s.rho);
  const Grid& grid = s.grid();
  const std::size_t np = grid.size();
  ScalarField a(grid);
  for (std::size_t p = 0; p < np; ++p) a[p] = 1.0 / s.rho[p];
  const auto [amin, amax] = std::minmax_element(a.values().begin(), a.values().end());
  const double a0 = 0.5 * (*amin + *amax);

  const ScalarField b = divergence(w);
  double bnorm = l2(b.values(), grid);
  if (bnorm == 0.0) return PressureSolution{ScalarField(grid), 0, 0.0};
  for (int ax = 0; ax < s.dim(); ++ax) bnorm += l2(derivative(grid, w[ax], ax), grid);
  PressureSolution sol{ScalarField(grid), 0, 0.0};

  auto apply = [&](const ScalarField& q) {
    VectorField flux = pointwise_scale(a, gradient(q));
    return divergence(maybe_dealias(std::move(flux), cfg.dealias));
  };

  ScalarField r = b;
  for (int it = 1; it <= cfg.pressure_max_iter; ++it) {
    Array correction = inverse_laplacian_meanzero(grid, r.values());
    for (std::size_t p = 0; p < np; ++p) sol.q[p] -= correction[p] / a0;
    r = b;
    r -= apply(sol.q);
    sol.iterations = it;
    sol.relative_residual = l2(r.values(), grid) / bnorm;
    if (!std::isfinite(sol.relative_residual)) break;
    if (sol.relative_residual <= cfg.pressure_tol) return sol;
  }
  std::ostringstream os;
  os << "relative residual " << sol.relative_residual << " after " << sol.iterations << " iterations";
  throw NumericalAbort(AbortReason::pressure, os.str());
}

MomentumRhs momentum_rhs_detail(const State& s, const StepConfig& cfg, const SystemResidual* forcing) {
  require_positive_density(s.rho);
  const Grid& grid = s.grid();
  const std::size_t np = grid.size();
  const bool da = cfg.dealias;

  ScalarField inv_rho(grid);
  for (std::size_t p = 0; p < np; ++p) inv_rho[p] = 1.0 / s.rho[p];

  const TensorField gu = gradient(s.u);
  VectorField w = maybe_dealias(advect_vector(s.u, gu), da);
  w *= -1.0;

  // mu lap u - grad P(rho) + div(rho F F^T) [+ f_m - u f_rho]
  VectorField bracket = laplacian(s.u);
  bracket *= cfg.mu;
  bracket -= gradient(maybe_dealias(pressure_field(s.rho, cfg.law), da));
  {
    const int d = s.dim();
    const TensorField F = s.F();
    TensorField stress(grid);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (std::size_t p = 0; p < np; ++p) {
          double acc = 0.0;
          for (int k = 0; k < d; ++k) acc += F(i, k)[p] * F(j, k)[p];
          stress(i, j)[p] = s.rho[p] * acc;
        }
    bracket += divergence(maybe_dealias(std::move(stress), da));
  }
  if (forcing != nullptr) {
    bracket += forcing->momentum;
    bracket -= maybe_dealias(pointwise_scale(forcing->continuity, s.u), da);
  }
  w += maybe_dealias(pointwise_scale(inv_rho, std::move(bracket)), da);

  MomentumRhs out{std::move(w), ScalarField(grid), 0};
  if (cfg.mode == Mode::incompressible) {
    PressureSolution ps = pressure_solve(s, out.dudt, cfg);
    out.dudt -= maybe_dealias(pointwise_scale(inv_rho, gradient(ps.q)), da);
    out.q = std::move(ps.q);
    out.pressure_iterations = ps.iterations;
  }
  return out;
}

VectorField momentum_rhs(const State& s, const StepConfig& cfg) {
  return momentum_rhs_detail(s, cfg).dudt;
}

SystemResidual residual(const State& s, const TimeDerivatives& dt, const ResidualOptions& opt) {
  const Grid& grid = s.grid();
  const int d = s.dim();
  const std::size_t np = grid.size();
  SystemResidual r(grid);

  // continuity
  {
    const VectorField flux = pointwise_scale(s.rho, s.u);
    r.continuity = dt.rho;
    r.continuity += divergence(flux);
  }
  // momentum
  {
    TensorField conv(grid);
    const TensorField F = s.F();
    TensorField stress(grid);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (std::size_t p = 0; p < np; ++p) {
          conv(i, j)[p] = s.rho[p] * s.u[i][p] * s.u[j][p];
          double acc = 0.0;
          for (int k = 0; k < d; ++k) acc += F(i, k)[p] * F(j, k)[p];
          stress(i, j)[p] = s.rho[p] * acc;
        }
    ScalarField pressure = pressure_field(s.rho, opt.law);
    if (opt.multiplier != nullptr) pressure += *opt.multiplier;

    VectorField m(grid);
    for (int i = 0; i < d; ++i)
      for (std::size_t p = 0; p < np; ++p) m[i][p] = dt.rho[p] * s.u[i][p] + s.rho[p] * dt.u[i][p];
    m += divergence(conv);
    m.axpy(-opt.mu, laplacian(s.u));
    m.axpy(opt.pressure_scale, gradient(pressure));
    m.axpy(-opt.elastic_scale, divergence(stress));
    r.momentum = std::move(m);
  }
  // deformation
  {
    r.deformation = dt.E;
    r.deformation -= deformation_rhs(s, false);
  }
  return r;
}

TimeDerivatives scale_time_derivatives(const TimeDerivatives& d, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("scale_time_derivatives: nu must be > 0");
  const Grid g = d.rho.grid().with_length(nu * d.rho.grid().length());
  TimeDerivatives out = d;
  out.rho.set_grid(g);
  out.u.set_grid(g);
  out.E.set_grid(g);
  out.rho *= 1.0 / (nu * nu);
  out.u *= 1.0 / (nu * nu * nu);
  out.E *= 1.0 / (nu * nu);
  return out;
}

double cfl_number(const State& s, double dt) {
  const std::size_t np = s.grid().size();
  double umax = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double m = 0.0;
    for (int k = 0; k < s.dim(); ++k) m += s.u[k][p] * s.u[k][p];
    umax = std::max(umax, std::sqrt(m));
  }
  return umax * dt / s.grid().spacing();
}

namespace {

struct StageRates {
  ScalarField rho;
  VectorField u_explicit;  // d_t u minus mu lap u
  TensorField E;
  std::optional<VectorField> sigma;
  int pressure_iterations = 0;
};

StageRates stage_rates(const State& s, const StepConfig& cfg, const VectorField* sigma) {
  std::optional<SystemResidual> f;
  if (cfg.forcing) f.emplace(cfg.forcing(s.grid(), s.t));
  const SystemResidual* fp = f ? &*f : nullptr;

  MomentumRhs m = momentum_rhs_detail(s, cfg, fp);
  m.dudt.axpy(-cfg.mu, laplacian(s.u));
  StageRates r{continuity_rhs(s, cfg.mode, cfg.dealias), std::move(m.dudt),
               cfg.evolve_E ? deformation_rhs(s, cfg.dealias) : TensorField(s.grid()), std::nullopt,
               m.pressure_iterations};
  if (fp != nullptr) {
    r.rho += fp->continuity;
    if (cfg.evolve_E) r.E += fp->deformation;
  }
  if (sigma != nullptr) {
    ScalarField flux(s.grid());
    for (std::size_t p = 0; p < s.grid().size(); ++p) {
      double acc = 0.0;
      for (int k = 0; k < s.dim(); ++k) acc += s.u[k][p] * (*sigma)[k][p];
      flux[p] = acc;
    }
    VectorField g = gradient(maybe_dealias(std::move(flux), cfg.dealias));
    g *= -1.0;
    r.sigma = std::move(g);
  }
  return r;
}

void require_finite(const State& s) {
  if (!s.all_finite()) throw NumericalAbort(AbortReason::density, "non-finite state");
}

}  // namespace

StepOutput advance(const State& s, const StepConfig& cfg, const VectorField* sigma) {
  cfg.validate();
  require_positive_density(s.rho);
  const double cfl = cfl_number(s, cfg.dt);
  if (cfl > 1.0) {
    std::ostringstream os;
    os << "CFL number " << cfl << " > 1";
    throw NumericalAbort(AbortReason::cfl, os.str());
  }
  const double dt = cfg.dt;
  const double visc = cfg.mu * dt;
  const bool incompressible = cfg.mode == Mode::incompressible;

  const StageRates k1 = stage_rates(s, cfg, sigma);
  const double diss_n = cfg.mu * h1_seminorm_sq(s.u);

  State s1 = s;
  s1.t = s.t + dt;
  s1.rho.axpy(dt, k1.rho);
  s1.E.axpy(dt, k1.E);
  {
    VectorField tmp = s.u;
    tmp.axpy(dt, k1.u_explicit);
    s1.u = heat_propagate(tmp, visc);
    if (incompressible) s1.u = leray_project(s1.u);
  }
  require_positive_density(s1.rho);
  require_finite(s1);
  std::optional<VectorField> sigma1;
  if (sigma != nullptr) {
    sigma1 = *sigma;
    sigma1->axpy(dt, *k1.sigma);
  }

  StepOutput out{s1, 0.0, std::nullopt, cfl, k1.pressure_iterations};
  if (cfg.scheme == Scheme::imex1) {
    out.dissipation = dt * diss_n;
    out.sigma = std::move(sigma1);
    return out;
  }

  const StageRates k2 = stage_rates(s1, cfg, sigma1 ? &*sigma1 : nullptr);
  const double diss_1 = cfg.mu * h1_seminorm_sq(s1.u);

  State s2 = s;
  s2.t = s.t + dt;
  s2.rho.axpy(0.5 * dt, k1.rho);
  s2.rho.axpy(0.5 * dt, k2.rho);
  s2.E.axpy(0.5 * dt, k1.E);
  s2.E.axpy(0.5 * dt, k2.E);
  {
    VectorField tmp = s.u;
    tmp.axpy(0.5 * dt, k1.u_explicit);
    VectorField u2 = heat_propagate(tmp, visc);
    u2.axpy(0.5 * dt, k2.u_explicit);
    s2.u = incompressible ? leray_project(u2) : std::move(u2);
  }
  require_positive_density(s2.rho);
  require_finite(s2);
  out.state = std::move(s2);
  out.dissipation = 0.5 * dt * (diss_n + diss_1);
  out.pressure_iterations = std::max(k1.pressure_iterations, k2.pressure_iterations);
  if (sigma != nullptr) {
    VectorField sg = *sigma;
    sg.axpy(0.5 * dt, *k1.sigma);
    sg.axpy(0.5 * dt, *k2.sigma);
    out.sigma = std::move(sg);
  }
  return out;
}

}  // namespace vela
