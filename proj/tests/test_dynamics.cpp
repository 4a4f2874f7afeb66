#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "vela/dynamics.hpp"
#include "vela/errors.hpp"
#include "vela/initial.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"

using namespace vela;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

State taylor_green_state(const Grid& g) {
  State s = equilibrium_state(g);
  s.u = taylor_green(g);
  return s;
}
}  // namespace

TEST_CASE("step config validation") {
  StepConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = StepConfig{};
  c.mu = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = StepConfig{};
  c.law.gamma = 0.9;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("equilibrium is a fixed point of every right-hand side") {
  for (Mode mode : {Mode::incompressible, Mode::compressible}) {
    const State s = equilibrium_state(Grid::make(2, 16, 1.0));
    StepConfig c;
    c.mode = mode;
    CHECK(lq_norm(continuity_rhs(s, mode), kInf) == 0.0);
    CHECK(lq_norm(momentum_rhs(s, c), kInf) == 0.0);
    CHECK(lq_norm(deformation_rhs(s), kInf) == 0.0);
    const State n = step(s, c);
    CHECK(lq_norm(n.u, kInf) == 0.0);
    CHECK(lq_norm(n.E, kInf) == 0.0);
    CHECK(n.rho_min() == 1.0);
    CHECK(n.rho_max() == 1.0);
  }
}

TEST_CASE("continuity forms agree for solenoidal velocity") {
  const Grid g = Grid::make(2, 32, 1.0);
  State s = oracle::random_state(g, 3, 0.2, 2);
  s.u = leray_project(s.u);
  const ScalarField a = continuity_rhs(s, Mode::incompressible, false);
  const ScalarField b = continuity_rhs(s, Mode::compressible, false);
  CHECK(lq_norm(a - b, kInf) < 1e-13);
}

TEST_CASE("deformation right-hand side for a shear flow") {
  // u = (sin y, 0), E = 0: d_t E = grad u, only E_01 = cos y.
  const Grid g = Grid::make(2, 16, kTwoPi);
  State s = equilibrium_state(g);
  s.u[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[1]); }).values();
  const TensorField r = deformation_rhs(s);
  const ScalarField cy = sample(g, [](const std::array<double, 3>& x) { return std::cos(x[1]); });
  CHECK(oracle::max_abs_diff(r(0, 1), cy.values()) < 1e-13);
  CHECK(oracle::max_abs(r(0, 0)) < 1e-13);
  CHECK(oracle::max_abs(r(1, 0)) < 1e-13);
  CHECK(oracle::max_abs(r(1, 1)) < 1e-13);
}

TEST_CASE("deformation right-hand side against finite differences") {
  const Grid g = Grid::make(2, 128, 1.0);
  const State s = oracle::random_state(g, 8, 0.3, 2);
  const TensorField r = deformation_rhs(s, false);
  const int d = 2;
  std::vector<Array> du, dE;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) du.push_back(oracle::fd4_derivative(g, s.u[i], j));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) dE.push_back(oracle::fd4_derivative(g, s.E(i, j), k));
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < g.size(); ++p) {
        double v = du[i * d + j][p];
        for (int k = 0; k < d; ++k) v += du[i * d + k][p] * s.E(k, j)[p] - s.u[k][p] * dE[(i * d + j) * d + k][p];
        err = std::max(err, std::abs(v - r(i, j)[p]));
        scale = std::max(scale, std::abs(v));
      }
  CHECK(err < 1e-5 * scale);
}

TEST_CASE("Taylor-Green is an exact decaying solution") {
  const Grid g = Grid::make(2, 32, kTwoPi);
  const State s = taylor_green_state(g);
  StepConfig c;
  c.mu = 0.07;
  const MomentumRhs m = momentum_rhs_detail(s, c);
  VectorField expected = s.u;
  expected *= -2.0 * c.mu;
  CHECK(lq_norm(m.dudt - expected, kInf) < 1e-12);
  // The multiplier balances the advection: q = (cos 2x + cos 2y) / 4.
  const ScalarField q = sample(g, [](const std::array<double, 3>& x) { return 0.25 * (std::cos(2 * x[0]) + std::cos(2 * x[1])); });
  CHECK(lq_norm(m.q - q, kInf) < 1e-12);
}

TEST_CASE("pressure solve enforces the variable-coefficient Poisson equation") {
  const Grid g = Grid::make(2, 32, 1.0);
  const State s = oracle::random_state(g, 13, 0.2, 2);
  Rng rng(2);
  const VectorField w = random_bandlimited_vector(g, 3, 1.0, rng);
  StepConfig c;
  c.dealias = false;
  const PressureSolution ps = pressure_solve(s, w, c);
  ScalarField inv(g);
  for (std::size_t p = 0; p < g.size(); ++p) inv[p] = 1.0 / s.rho[p];
  const ScalarField lhs = divergence(pointwise_scale(inv, gradient(ps.q)));
  CHECK(lq_norm(lhs - divergence(w), 2.0) < 1e-9 * lq_norm(divergence(w), 2.0));
  CHECK(std::abs(mean(ps.q.values())) < 1e-14);
}

TEST_CASE("incompressible acceleration is divergence free") {
  const Grid g = Grid::make(2, 32, 1.0);
  State s = oracle::random_state(g, 17, 0.2, 2);
  s.u = leray_project(s.u);
  StepConfig c;
  const VectorField a = momentum_rhs(s, c);
  double terms = 0.0;
  for (int ax = 0; ax < 2; ++ax) terms += lq_norm(g, {derivative(g, a[ax], ax)}, 2.0);
  CHECK(terms > 1.0);
  CHECK(lq_norm(divergence(a), 2.0) < 1e-9 * terms);
}

TEST_CASE("pressure iteration limit triggers an abort") {
  const Grid g = Grid::make(2, 16, 1.0);
  const State s = oracle::random_state(g, 17, 0.3, 2);
  StepConfig c;
  c.pressure_max_iter = 1;
  c.pressure_tol = 1e-14;
  try {
    momentum_rhs(s, c);
    FAIL("expected an abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.reason() == AbortReason::pressure);
    CHECK(std::string(e.what()).find("pressure iteration diverged") != std::string::npos);
  }
}

TEST_CASE("residual vanishes on the right-hand side it describes") {
  // Without dealiasing and with resolved products the conservative residual
  // of (rho, u, E) with derivatives taken from the compressible right-hand
  // sides is round-off.
  const Grid g = Grid::make(2, 32, 1.0);
  const State s = oracle::random_state(g, 23, 0.1, 1);
  StepConfig c;
  c.mode = Mode::compressible;
  c.dealias = false;
  TimeDerivatives d(g);
  d.rho = continuity_rhs(s, c.mode, false);
  d.u = momentum_rhs(s, c);
  d.E = deformation_rhs(s, false);
  ResidualOptions opt;
  opt.mu = c.mu;
  const SystemResidual r = residual(s, d, opt);
  CHECK(lq_norm(r.continuity, kInf) < 1e-12);
  CHECK(lq_norm(r.momentum, kInf) < 1e-11);
  CHECK(lq_norm(r.deformation, kInf) < 1e-12);
}

TEST_CASE("scale_time_derivatives factors") {
  const Grid g = Grid::make(2, 8, 1.0);
  TimeDerivatives d(g);
  d.rho.values().assign(g.size(), 1.0);
  d.u[0].assign(g.size(), 1.0);
  d.E(1, 1).assign(g.size(), 1.0);
  const TimeDerivatives s = scale_time_derivatives(d, 2.0);
  CHECK(s.rho[0] == 0.25);
  CHECK(s.u[0][0] == 0.125);
  CHECK(s.E(1, 1)[0] == 0.25);
  CHECK(s.rho.grid().length() == 2.0);
}

TEST_CASE("CFL number and CFL abort") {
  const Grid g = Grid::make(2, 16, kTwoPi);
  const State s = taylor_green_state(g);
  CHECK(cfl_number(s, 0.1) == doctest::Approx(0.1 / g.spacing()).epsilon(1e-12));
  StepConfig c;
  c.dt = 1.0;
  try {
    step(s, c);
    FAIL("expected an abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.reason() == AbortReason::cfl);
    CHECK(std::string(e.what()).find("CFL abort") != std::string::npos);
  }
}

TEST_CASE("density positivity is checked") {
  const Grid g = Grid::make(2, 16, 1.0);
  State s = equilibrium_state(g);
  s.rho[4] = -0.1;
  try {
    step(s, StepConfig{});
    FAIL("expected an abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.reason() == AbortReason::density);
    CHECK(std::string(e.what()).find("density positivity lost") != std::string::npos);
  }
}

TEST_CASE("Taylor-Green decays exactly under the integrating factor with E frozen") {
  const Grid g = Grid::make(2, 32, kTwoPi);
  State s = taylor_green_state(g);
  StepConfig c;
  c.evolve_E = false;
  c.mu = 0.1;
  c.dt = 0.01;
  for (int i = 0; i < 50; ++i) s = step(s, c);
  VectorField expected = taylor_green(g, std::exp(-2.0 * c.mu * 0.5));
  CHECK(lq_norm(s.u - expected, kInf) < 1e-13);
  CHECK(lq_norm(s.E, kInf) == 0.0);
  CHECK(s.t == doctest::Approx(0.5));
}

TEST_CASE("time integrators converge at their design order") {
  const Grid g = Grid::make(2, 16, kTwoPi);
  const State s0 = taylor_green_perturbed(g, 0.2, 3, false);
  StepConfig c;
  c.mode = Mode::compressible;
  c.mu = 0.2;
  auto run = [&](Scheme scheme, double dt) {
    StepConfig k = c;
    k.scheme = scheme;
    k.dt = dt;
    State s = s0;
    const int n = static_cast<int>(std::lround(0.4 / dt));
    for (int i = 0; i < n; ++i) s = step(s, k);
    return s;
  };
  const State ref = run(Scheme::imex2, 0.4 / 800);
  for (Scheme scheme : {Scheme::imex2, Scheme::imex1}) {
    const double e1 = lq_norm(run(scheme, 0.02).E - ref.E, 2.0) + lq_norm(run(scheme, 0.02).u - ref.u, 2.0);
    const double e2 = lq_norm(run(scheme, 0.01).E - ref.E, 2.0) + lq_norm(run(scheme, 0.01).u - ref.u, 2.0);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(scheme == Scheme::imex2 ? 2.0 : 1.0).epsilon(0.1));
  }
}

TEST_CASE("sigma rides along with the same stages") {
  const Grid g = Grid::make(2, 16, kTwoPi);
  const State s = taylor_green_perturbed(g, 0.05, 1, false);
  VectorField sigma(g, 0.25);
  const StepOutput a = advance(s, StepConfig{}, &sigma);
  const StepOutput b = advance(s, StepConfig{});
  REQUIRE(a.sigma.has_value());
  CHECK_FALSE(b.sigma.has_value());
  CHECK(lq_norm(a.state.u - b.state.u, kInf) == 0.0);
  CHECK(a.dissipation > 0.0);
}

TEST_CASE("pressure solve recovers a manufactured multiplier") {
  const Grid g = Grid::make(2, 32, kTwoPi);
  State s = equilibrium_state(g);
  s.rho = sample(g, [](const std::array<double, 3>& x) { return 1.0 + 0.2 * std::sin(x[0]); });
  const ScalarField qstar = sample(g, [](const std::array<double, 3>& x) { return std::cos(x[1]); });
  ScalarField inv(g);
  for (std::size_t p = 0; p < g.size(); ++p) inv[p] = 1.0 / s.rho[p];
  Rng rng(77);
  VectorField w = leray_project(random_bandlimited_vector(g, 3, 1.0, rng));
  w += pointwise_scale(inv, gradient(qstar));
  StepConfig c;
  c.dealias = false;
  const PressureSolution ps = pressure_solve(s, w, c);
  CHECK(lq_norm(ps.q - qstar, kInf) < 1e-8);
}

TEST_CASE("pressure solve special cases") {
  const Grid g = Grid::make(2, 32, kTwoPi);
  const State s = equilibrium_state(g);
  Rng rng(78);
  const VectorField w = random_bandlimited_vector(g, 3, 1.0, rng);
  const PressureSolution ps = pressure_solve(s, w, StepConfig{});
  CHECK(ps.iterations == 1);
  const ScalarField expected = inverse_laplacian_meanzero(divergence(w));
  CHECK(lq_norm(ps.q + expected, kInf) < 1e-13);

  const PressureSolution zero = pressure_solve(oracle::random_state(g, 4), leray_project(w), StepConfig{});
  CHECK(lq_norm(zero.q, kInf) < 1e-12);
}

TEST_CASE("deformation right-hand side with E = 0 is grad u") {
  const Grid g = Grid::make(3, 16, 1.0);
  State s = equilibrium_state(g);
  Rng rng(79);
  s.u = random_bandlimited_vector(g, 2, 1.0, rng);
  CHECK(lq_norm(deformation_rhs(s) - gradient(s.u), kInf) == 0.0);
}
