#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "vela/dynamics.hpp"
#include "vela/errors.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"
#include "vela/state.hpp"

using namespace vela;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("pressure law values") {
  const PressureLaw law = PressureLaw::make(1.0, 2.0);
  CHECK(law.potential(1.5) == doctest::Approx(0.25));
  CHECK(law.potential(1.0) == 0.0);
  CHECK(law.pressure(1.5) == doctest::Approx(2.25));
  // Pi'(1) = 0, Pi'' = P'(rho) / rho
  const PressureLaw l3 = PressureLaw::make(0.7, 1.4);
  const double h = 1e-5;
  CHECK(std::abs((l3.potential(1 + h) - l3.potential(1 - h)) / (2 * h)) < 1e-9);
  const double r = 1.3;
  const double pi2 = (l3.potential(r + h) - 2 * l3.potential(r) + l3.potential(r - h)) / (h * h);
  const double dp = (l3.pressure(r + h) - l3.pressure(r - h)) / (2 * h);
  CHECK(pi2 == doctest::Approx(dp / r).epsilon(1e-5));
  CHECK_THROWS_AS(PressureLaw::make(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PressureLaw::make(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("pressure potential rejects non-positive density") {
  const Grid g = Grid::make(2, 8, 1.0);
  ScalarField rho(g, 1.0);
  rho[3] = 0.0;
  CHECK_THROWS_AS(pressure_potential(rho, PressureLaw{}), std::invalid_argument);
  CHECK_THROWS_AS(require_positive_density(rho), NumericalAbort);
}

TEST_CASE("equilibrium satisfies every constraint exactly") {
  for (int dim : {2, 3}) {
    const State s = equilibrium_state(Grid::make(dim, 16, 1.0));
    const ConstraintReport r = constraint_report(s);
    CHECK(r.div_rhoFT_l2 == 0.0);
    CHECK(r.curl_compat_l2 == 0.0);
    CHECK(r.grad_rho_identity_l2 == 0.0);
    CHECK(r.force_equivalence_l2 == 0.0);
    CHECK(rho_detF_deviation(s) == 0.0);
    CHECK(s.F()(0, 0)[0] == 1.0);
  }
}

TEST_CASE("curl residual matches an index-loop oracle with direct Fourier derivatives") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::make(dim, 8, 1.3);
    Rng rng(100 + dim);
    const TensorField E = random_bandlimited_tensor(g, 2, 0.5, rng);
    const CurlResidual R = curl_compat_residual(E);
    // dE[i][j][l] = d_l E_ij
    std::vector<Array> dE;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int l = 0; l < dim; ++l) dE.push_back(oracle::naive_derivative(g, E(i, j), l));
    auto d = [&](int i, int j, int l) -> const Array& { return dE[(i * dim + j) * dim + l]; };
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (std::size_t p = 0; p < g.size(); ++p) {
            double v = d(i, j, k)[p] - d(i, k, j)[p];
            for (int l = 0; l < dim; ++l) v += E(l, k)[p] * d(i, j, l)[p] - E(l, j)[p] * d(i, k, l)[p];
            err = std::max(err, std::abs(R.at(i, j, k, p) - v));
            scale = std::max(scale, std::abs(v));
          }
    CHECK(scale > 1e-2);
    CHECK(err < 1e-12);
  }
}

TEST_CASE("curl residual is antisymmetric in its last two indices") {
  const Grid g = Grid::make(3, 8, 1.0);
  Rng rng(7);
  const CurlResidual R = curl_compat_residual(random_bandlimited_tensor(g, 2, 1.0, rng));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (std::size_t p = 0; p < g.size(); p += 17) CHECK(R.at(i, j, k, p) == -R.at(i, k, j, p));
}

TEST_CASE("linear gradient deformation has only the quadratic curl defect") {
  // E = eps grad psi: the linear part of the curl residual cancels, so the
  // residual is O(eps^2).
  const Grid g = Grid::make(2, 16, kTwoPi);
  Rng rng(12);
  const VectorField psi = random_bandlimited_vector(g, 2, 1.0, rng);
  const TensorField gp = gradient(psi);
  double r1 = 0.0, r2 = 0.0;
  for (double eps : {1e-2, 1e-3}) {
    TensorField E = gp;
    E *= eps;
    (eps == 1e-2 ? r1 : r2) = curl_compat_residual(E).l2();
  }
  CHECK(r1 / r2 == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("elastic force defect equals F times the constraint pointwise") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::make(dim, 16, 1.0);
    const State s = oracle::random_state(g, 31 + dim, 0.2, 1);
    const VectorField full = elastic_force(s, ForceMode::full);
    const VectorField red = elastic_force(s, ForceMode::reduced);
    const VectorField c = constraint_div_rhoFT(s);
    const TensorField F = s.F();
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < dim; ++i)
      for (std::size_t p = 0; p < g.size(); ++p) {
        double expanded = 0.0;
        for (int k = 0; k < dim; ++k) expanded += F(i, k)[p] * c[k][p];
        err = std::max(err, std::abs(full[i][p] - red[i][p] - expanded));
        scale = std::max(scale, std::abs(expanded));
      }
    CHECK(scale > 1e-2);
    CHECK(err < 1e-12);
  }
}

TEST_CASE("constraint and its gradient form agree on arbitrary states") {
  // d_i rho + rho d_j E_ji + E_ji d_j rho = d_j(rho F_ji) exactly.
  const Grid g = Grid::make(2, 16, 1.0);
  const State s = oracle::random_state(g, 5, 0.2, 1);
  const VectorField a = constraint_div_rhoFT(s);
  const VectorField b = grad_rho_identity_residual(s);
  CHECK(lq_norm(a - b, kInf) < 1e-12);
  CHECK(lq_norm(a, kInf) > 1e-2);
}

TEST_CASE("constraint-compatible states satisfy the constraints") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::make(dim, dim == 2 ? 32 : 16, kTwoPi);
    const State s = constraint_compatible_state(g, dim == 2 ? 0.05 : 0.01, 4, 100);
    CHECK(lq_norm(s.E, 2.0) > 1e-3);
    CHECK(s.rho_max() - s.rho_min() > 1e-3);
    const ConstraintReport r = constraint_report(s);
    CHECK(r.div_rhoFT_l2 < 1e-10);
    CHECK(r.curl_compat_l2 < 1e-10);
    CHECK(r.grad_rho_identity_l2 < 1e-10);
    CHECK(r.force_equivalence_l2 < 1e-10);
    CHECK(rho_detF_deviation(s) < 1e-8);
  }
}

TEST_CASE("corrupting E breaks the constraints") {
  const Grid g = Grid::make(2, 32, kTwoPi);
  State s = constraint_compatible_state(g, 0.05, 4, 100);
  for (std::size_t p = 0; p < g.size(); ++p) s.E(0, 1)[p] += 0.01 * std::sin(g.coordinate(p, 0));
  const ConstraintReport r = constraint_report(s);
  CHECK(r.div_rhoFT_l2 > 1e-3);
  CHECK(r.curl_compat_l2 > 1e-3);
}

TEST_CASE("scale_state maps coordinates, time and velocity") {
  const Grid g = Grid::make(2, 16, 2.0);
  State s = oracle::random_state(g, 9);
  s.t = 0.3;
  const State sc = scale_state(s, 2.0);
  CHECK(sc.t == doctest::Approx(1.2));
  CHECK(sc.grid().length() == doctest::Approx(4.0));
  CHECK(sc.u[1][5] == doctest::Approx(s.u[1][5] / 2.0));
  CHECK(sc.rho[5] == s.rho[5]);
  CHECK(sc.E(1, 0)[5] == s.E(1, 0)[5]);
  CHECK_THROWS_AS(scale_state(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_state(s, -1.0), std::invalid_argument);
}

TEST_CASE("scaled residuals pick up the scaling powers") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::make(dim, 16, 1.0);
    const State s = oracle::random_state(g, 60 + dim, 0.3, 2);
    const State d0 = oracle::random_state(g, 70 + dim, 0.3, 2);
    TimeDerivatives d(g);
    d.rho = d0.rho;
    d.u = d0.u;
    d.E = d0.E;
    ResidualOptions opt;
    opt.mu = 0.3;
    opt.law = PressureLaw{1.2, 1.7};
    const SystemResidual r = residual(s, d, opt);
    for (double nu : {0.5, 2.0, 4.0}) {
      ResidualOptions so = opt;
      so.pressure_scale = so.elastic_scale = 1.0 / (nu * nu);
      const SystemResidual rs = residual(scale_state(s, nu), scale_time_derivatives(d, nu), so);
      auto rel = [](const auto& a, auto b, double f) {
        b *= f;
        Field<std::remove_cvref_t<decltype(a)>::rank> diff = a;
        diff.set_grid(b.grid());
        return lq_norm(diff - b, kInf) / lq_norm(b, kInf);
      };
      CHECK(rel(rs.continuity, r.continuity, 1.0 / (nu * nu)) < 1e-10);
      CHECK(rel(rs.momentum, r.momentum, 1.0 / (nu * nu * nu)) < 1e-10);
      CHECK(rel(rs.deformation, r.deformation, 1.0 / (nu * nu)) < 1e-10);
    }
  }
}
