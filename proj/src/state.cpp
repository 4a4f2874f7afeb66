#include "vela/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vela/errors.hpp"
#include "vela/norms.hpp"
#include "vela/spectral.hpp"

namespace vela {

PressureLaw PressureLaw::make(double A, double gamma) {
  if (!(A > 0.0)) throw std::invalid_argument("pressure law: A must be > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("pressure law: gamma must be > 1");
  return PressureLaw{A, gamma};
}

TensorField State::F() const {
  TensorField f = E;
  for (int i = 0; i < dim(); ++i)
    for (double& x : f(i, i)) x += 1.0;
  return f;
}

double State::rho_min() const { return *std::min_element(rho.values().begin(), rho.values().end()); }
double State::rho_max() const { return *std::max_element(rho.values().begin(), rho.values().end()); }

State equilibrium_state(const Grid& grid) { return State(grid); }

void require_positive_density(const ScalarField& rho) {
  const double m = *std::min_element(rho.values().begin(), rho.values().end());
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "min rho = " << m;
    throw NumericalAbort(AbortReason::density, os.str());
  }
}

ScalarField pressure_field(const ScalarField& rho, const PressureLaw& law) {
  ScalarField p(rho.grid());
  for (std::size_t i = 0; i < p.grid().size(); ++i) p[i] = law.pressure(rho[i]);
  return p;
}

ScalarField pressure_potential(const ScalarField& rho, const PressureLaw& law) {
  ScalarField p(rho.grid());
  for (std::size_t i = 0; i < p.grid().size(); ++i) {
    if (!(rho[i] > 0.0)) throw std::invalid_argument("pressure_potential: density must be positive");
    p[i] = law.potential(rho[i]);
  }
  return p;
}

VectorField constraint_div_rhoFT(const State& s) {
  const int d = s.dim();
  const TensorField F = s.F();
  TensorField rhoFT(s.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t p = 0; p < s.grid().size(); ++p) rhoFT(i, j)[p] = s.rho[p] * F(j, i)[p];
  return divergence(rhoFT);
}

double CurlResidual::l2() const { return lq_norm(grid, comps, 2.0); }
double CurlResidual::lq(double q) const { return lq_norm(grid, comps, q); }

CurlResidual curl_compat_residual(const TensorField& E) {
  const Grid& grid = E.grid();
  const int d = grid.dim();
  const std::size_t np = grid.size();
  // dE[(i*d + j)*d + l] = d_l E_ij
  std::vector<Array> dE;
  dE.reserve(d * d * d);
  for (int c = 0; c < d * d; ++c)
    for (auto& part : partials(grid, E.comp(c))) dE.push_back(std::move(part));
  auto grad = [&](int i, int j, int l) -> const Array& { return dE[(i * d + j) * d + l]; };

  // half[i][j][k] = d_k E_ij + E_lk d_l E_ij; R_ijk = half_ijk - half_ikj
  std::vector<Array> half(d * d * d, Array(np, 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Array& h = half[(i * d + j) * d + k];
        const Array& dk = grad(i, j, k);
        for (std::size_t p = 0; p < np; ++p) {
          double acc = dk[p];
          for (int l = 0; l < d; ++l) acc += E(l, k)[p] * grad(i, j, l)[p];
          h[p] = acc;
        }
      }
  CurlResidual r{grid, std::vector<Array>(d * d * d, Array(np, 0.0))};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (std::size_t p = 0; p < np; ++p)
          r.at(i, j, k, p) = half[(i * d + j) * d + k][p] - half[(i * d + k) * d + j][p];
  return r;
}

namespace {

TensorField transpose(const TensorField& t) {
  TensorField out(t.grid());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out(i, j) = t(j, i);
  return out;
}

// dT[(i*d + k)*d + j] = d_j T_ik
std::vector<Array> tensor_gradient(const TensorField& t) {
  const int d = t.dim();
  std::vector<Array> out;
  out.reserve(d * d * d);
  for (int c = 0; c < d * d; ++c)
    for (auto& part : partials(t.grid(), t.comp(c))) out.push_back(std::move(part));
  return out;
}

}  // namespace

VectorField grad_rho_identity_residual(const State& s) {
  const int d = s.dim();
  const std::size_t np = s.grid().size();
  const VectorField grho = gradient(s.rho);
  const VectorField divET = divergence(transpose(s.E));  // d_j E_ji
  VectorField r(s.grid());
  for (int i = 0; i < d; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      double acc = grho[i][p] + s.rho[p] * divET[i][p];
      for (int j = 0; j < d; ++j) acc += s.E(j, i)[p] * grho[j][p];
      r[i][p] = acc;
    }
  return r;
}

VectorField elastic_force(const State& s, ForceMode mode) {
  const int d = s.dim();
  const std::size_t np = s.grid().size();
  const TensorField F = s.F();
  if (mode == ForceMode::full) {
    TensorField stress(s.grid());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (std::size_t p = 0; p < np; ++p) {
          double acc = 0.0;
          for (int k = 0; k < d; ++k) acc += F(i, k)[p] * F(j, k)[p];
          stress(i, j)[p] = s.rho[p] * acc;
        }
    return divergence(stress);
  }
  const std::vector<Array> dE = tensor_gradient(s.E);
  VectorField out(s.grid());
  for (int i = 0; i < d; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) acc += F(j, k)[p] * dE[(i * d + k) * d + j][p];
      out[i][p] = s.rho[p] * acc;
    }
  return out;
}

ConstraintReport constraint_report(const State& s) {
  ConstraintReport r;
  r.div_rhoFT_l2 = lq_norm(constraint_div_rhoFT(s), 2.0);
  r.curl_compat_l2 = curl_compat_residual(s.E).l2();
  r.grad_rho_identity_l2 = lq_norm(grad_rho_identity_residual(s), 2.0);
  r.force_equivalence_l2 =
      lq_norm(elastic_force(s, ForceMode::full) - elastic_force(s, ForceMode::reduced), 2.0);
  return r;
}

double rho_detF_deviation(const State& s) {
  const TensorField F = s.F();
  const std::size_t np = s.grid().size();
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double det = 0.0;
    if (s.dim() == 2) {
      det = F(0, 0)[p] * F(1, 1)[p] - F(0, 1)[p] * F(1, 0)[p];
    } else {
      det = F(0, 0)[p] * (F(1, 1)[p] * F(2, 2)[p] - F(1, 2)[p] * F(2, 1)[p]) -
            F(0, 1)[p] * (F(1, 0)[p] * F(2, 2)[p] - F(1, 2)[p] * F(2, 0)[p]) +
            F(0, 2)[p] * (F(1, 0)[p] * F(2, 1)[p] - F(1, 1)[p] * F(2, 0)[p]);
    }
    acc += std::abs(s.rho[p] * det - 1.0);
  }
  return acc * s.grid().cell_volume();
}

State scale_state(const State& s, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("scale_state: nu must be > 0");
  State out = s;
  const Grid g = s.grid().with_length(nu * s.grid().length());
  out.t = nu * nu * s.t;
  out.rho.set_grid(g);
  out.u.set_grid(g);
  out.E.set_grid(g);
  out.u *= 1.0 / nu;
  return out;
}

}  // namespace vela
