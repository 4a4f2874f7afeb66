#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "vela/errors.hpp"
#include "vela/initial.hpp"
#include "vela/mms.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"

using namespace vela;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Grid g32 = Grid::make(2, 32, kTwoPi);
}  // namespace

TEST_CASE("empty spec is the equilibrium") {
  ManufacturedSpec spec;
  const ManufacturedFields f = manufactured_fields(spec, g32, 0.7);
  CHECK(f.state.rho_min() == 1.0);
  CHECK(f.state.rho_max() == 1.0);
  CHECK(lq_norm(f.state.u, kInf) == 0.0);
  CHECK(lq_norm(f.derivatives.E, kInf) == 0.0);
  const SystemResidual r = manufactured_forcing(spec, g32, 0.7, StepConfig{});
  CHECK(lq_norm(r.continuity, kInf) == 0.0);
  CHECK(lq_norm(r.momentum, kInf) == 0.0);
  CHECK(lq_norm(r.deformation, kInf) == 0.0);
}

TEST_CASE("single velocity mode is an exact sinusoid") {
  ManufacturedSpec spec;
  spec.mode = Mode::compressible;
  spec.eps = 0.5;
  spec.u = {{{2, 1, 0}, {0.4, -0.8}, 0.3, 1.7}};
  const double t = 0.9;
  const ManufacturedFields f = manufactured_fields(spec, g32, t);
  double err = 0.0;
  for (std::size_t p = 0; p < g32.size(); ++p) {
    const double ph = 2 * g32.coordinate(p, 0) + g32.coordinate(p, 1) + 0.3 + 1.7 * t;
    err = std::max(err, std::abs(f.state.u[0][p] - 0.5 * 0.4 * std::cos(ph)));
    err = std::max(err, std::abs(f.state.u[1][p] + 0.5 * 0.8 * std::cos(ph)));
    err = std::max(err, std::abs(f.derivatives.u[0][p] + 0.5 * 0.4 * 1.7 * std::sin(ph)));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("incompressible spec projects velocity amplitudes") {
  ManufacturedSpec spec;
  spec.u = {{{1, 1, 0}, {1.0, 0.0}, 0.0, 1.0}};
  const ManufacturedFields f = manufactured_fields(spec, g32, 0.0);
  CHECK(lq_norm(divergence(f.state.u), kInf) < 1e-14);
  CHECK(lq_norm(f.state.u, kInf) > 1e-3);
}

TEST_CASE("time derivatives agree with centred differences at second order") {
  const ManufacturedSpec spec = standard_spec();
  const double t = 0.4;
  double prev = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const State a = manufactured_fields(spec, g32, t + h).state;
    const State b = manufactured_fields(spec, g32, t - h).state;
    const TimeDerivatives d = manufactured_fields(spec, g32, t).derivatives;
    TensorField fd = a.E - b.E;
    fd *= 1.0 / (2 * h);
    VectorField fu = a.u - b.u;
    fu *= 1.0 / (2 * h);
    const double err = lq_norm(fd - d.E, 2.0) + lq_norm(fu - d.u, 2.0);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.01));
    prev = err;
  }
}

TEST_CASE("spec validation") {
  ManufacturedSpec spec = standard_spec();
  CHECK_NOTHROW(spec.validate());
  spec.eps = 0.3;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = standard_spec();
  spec.u[0].amplitude = {1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = standard_spec();
  spec.E[0].k = {1, 0, 1};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = standard_spec();
  spec.u[0].k = {11, 0, 0};
  CHECK_THROWS_AS(manufactured_fields(spec, g32, 0.0), std::invalid_argument);
  CHECK_NOTHROW(manufactured_fields(spec, Grid::make(2, 64, kTwoPi), 0.0));
}

TEST_CASE("forcing round trip through the residual") {
  const ManufacturedSpec spec = standard_spec();
  StepConfig c;
  c.mu = 0.13;
  const SystemResidual f = manufactured_forcing(spec, g32, 0.3, c);
  const ManufacturedFields m = manufactured_fields(spec, g32, 0.3);
  ResidualOptions opt;
  opt.mu = c.mu;
  const SystemResidual r = residual(m.state, m.derivatives, opt);
  CHECK(lq_norm(f.continuity - r.continuity, kInf) < 1e-12);
  CHECK(lq_norm(f.momentum - r.momentum, kInf) < 1e-12);
  CHECK(lq_norm(f.deformation - r.deformation, kInf) < 1e-12);
  CHECK(lq_norm(f.momentum, kInf) > 1e-4);
}

TEST_CASE("Navier-Stokes Taylor-Green needs no momentum forcing beyond pressure") {
  const double mu = 0.1, t = 0.6;
  const double decay = std::exp(-2.0 * mu * t);
  State s = equilibrium_state(g32);
  s.u = taylor_green(g32, decay);
  TimeDerivatives d(g32);
  d.u = taylor_green(g32, -2.0 * mu * decay);
  const ScalarField q = sample(g32, [&](const std::array<double, 3>& x) {
    return 0.25 * decay * decay * (std::cos(2 * x[0]) + std::cos(2 * x[1]));
  });
  ResidualOptions opt;
  opt.mu = mu;
  opt.multiplier = &q;
  const SystemResidual r = residual(s, d, opt);
  CHECK(lq_norm(r.momentum, kInf) < 1e-10);
  CHECK(lq_norm(r.continuity, kInf) < 1e-12);
}

TEST_CASE("forced system keeps the manufactured solution") {
  const ManufacturedSpec spec = standard_spec();
  const StepConfig c = forced_config(spec, StepConfig{});
  const ManufacturedFields f = manufactured_fields(spec, g32, 0.25);
  const SystemResidual forcing = c.forcing(g32, 0.25);
  const VectorField du = momentum_rhs_detail(f.state, c, &forcing).dudt;
  CHECK(lq_norm(du - f.derivatives.u, kInf) < 1e-12);
}

TEST_CASE("convergence study argument checks") {
  StudyConfig st;
  st.dts = {0.1, 0.05};
  CHECK_THROWS_AS(convergence_study(standard_spec(), st), std::invalid_argument);
  st = StudyConfig{};
  st.ns = {32};
  CHECK_THROWS_AS(convergence_study(standard_spec(), st), std::invalid_argument);
  st = StudyConfig{};
  st.dts = {0.3, 0.2, 0.1};
  CHECK_THROWS_AS(convergence_study(standard_spec(), st), std::invalid_argument);
}

TEST_CASE("solver failures carry run coordinates") {
  StudyConfig st;
  st.step.pressure_max_iter = 1;
  st.step.pressure_tol = 1e-15;
  try {
    convergence_study(standard_spec(), st);
    FAIL("expected an abort");
  } catch (const NumericalAbort& e) {
    const std::string msg = e.what();
    CHECK(msg.find("n=32") != std::string::npos);
    CHECK(msg.find("dt=0.04") != std::string::npos);
  }
}

TEST_CASE("fitted order of an exact power law") {
  CHECK(fitted_order({0.1, 0.05, 0.025}, {3e-2, 7.5e-3, 1.875e-3}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(fitted_order({0.1}, {1.0}), std::invalid_argument);
}

TEST_CASE("temporal and spatial convergence on the standard spec") {
  for (Scheme scheme : {Scheme::imex2, Scheme::imex1}) {
    StudyConfig st;
    st.step.scheme = scheme;
    st.dts = scheme == Scheme::imex2 ? std::vector<double>{0.04, 0.02, 0.01} : std::vector<double>{0.02, 0.01, 0.005};
    st.ns = {16, 32};
    const ConvergenceReport r = convergence_study(standard_spec(), st);
    const double design = scheme == Scheme::imex2 ? 2.0 : 1.0;
    CHECK(std::abs(r.temporal_order.rho - design) <= 0.2);
    CHECK(std::abs(r.temporal_order.u - design) <= 0.2);
    CHECK(std::abs(r.temporal_order.E - design) <= 0.2);
    for (std::size_t i = 0; i + 1 < r.temporal_errors.size(); ++i) {
      CHECK(r.temporal_errors[i + 1].u <= r.temporal_errors[i].u);
      CHECK(r.temporal_errors[i + 1].E <= r.temporal_errors[i].E);
      CHECK(r.temporal_errors[i + 1].rho <= r.temporal_errors[i].rho);
    }
    for (const auto& e : r.temporal_errors) CHECK((e.rho > 0.0 && e.u > 0.0 && e.E > 0.0));
    for (const auto& e : r.spatial_errors) CHECK(std::max({e.rho, e.u, e.E}) <= 1e-10);
  }
}

TEST_CASE("compressible study") {
  StudyConfig st;
  st.step.mode = Mode::compressible;
  const ConvergenceReport r = convergence_study(standard_spec(Mode::compressible), st);
  CHECK(std::abs(r.temporal_order.u - 2.0) <= 0.2);
}
