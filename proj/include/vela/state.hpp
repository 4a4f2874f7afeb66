#pragma once

// The solution triple (rho, u, E) with F = I + E, the barotropic pressure law,
// and the structural constraints of the model as evaluable residuals.
//
// Index conventions: (grad u)_ij = d_j u_i, (grad u E)_ij = (grad u)_ik E_kj,
// (u . grad E)_ij = u_k d_k E_ij; tensor divergence is row-wise.

#include <vector>

#include "vela/grid.hpp"

namespace vela {

struct PressureLaw {
  double A = 1.0;
  double gamma = 2.0;

  /// Throws std::invalid_argument unless A > 0 and gamma > 1.
  static PressureLaw make(double A, double gamma);

  double pressure(double rho) const { return A * std::pow(rho, gamma); }
  /// Pi(rho) = A (rho^gamma - gamma rho + gamma - 1) / (gamma - 1)
  double potential(double rho) const {
    return A * (std::pow(rho, gamma) - gamma * rho + gamma - 1.0) / (gamma - 1.0);
  }
};

struct State {
  double t = 0.0;
  ScalarField rho;
  VectorField u;
  TensorField E;

  explicit State(const Grid& grid) : rho(grid, 1.0), u(grid), E(grid) {}

  const Grid& grid() const { return rho.grid(); }
  int dim() const { return rho.dim(); }
  /// F = I + E
  TensorField F() const;
  double rho_min() const;
  double rho_max() const;
  bool all_finite() const { return rho.all_finite() && u.all_finite() && E.all_finite(); }
};

/// rho = 1, u = 0, E = 0, t = 0
State equilibrium_state(const Grid& grid);

/// Throws NumericalAbort(density) if min rho <= 0.
void require_positive_density(const ScalarField& rho);

ScalarField pressure_field(const ScalarField& rho, const PressureLaw& law);
/// Pointwise Pi(rho); throws std::invalid_argument on non-positive density.
ScalarField pressure_potential(const ScalarField& rho, const PressureLaw& law);

/// c_i = d_j (rho F_ji), i.e. div(rho F^T).
VectorField constraint_div_rhoFT(const State& s);

/// Rank-3 curl-compatibility residual
///   R_ijk = d_k E_ij + E_lk d_l E_ij - d_j E_ik - E_nj d_n E_ik,
/// stored at i*d*d + j*d + k.
struct CurlResidual {
  Grid grid;
  std::vector<Array> comps;

  double& at(int i, int j, int k, std::size_t p) {
    const int d = grid.dim();
    return comps[(i * d + j) * d + k][p];
  }
  double at(int i, int j, int k, std::size_t p) const {
    const int d = grid.dim();
    return comps[(i * d + j) * d + k][p];
  }
  double l2() const;
  double lq(double q) const;
};

CurlResidual curl_compat_residual(const TensorField& E);

/// r_i = d_i rho + rho d_j E_ji + E_ji d_j rho
VectorField grad_rho_identity_residual(const State& s);

enum class ForceMode { full, reduced };

/// full:    d_j (rho F_ik F_jk)      = div(rho F F^T)
/// reduced: rho F_jk d_j E_ik        (equal to full when div(rho F^T) = 0)
VectorField elastic_force(const State& s, ForceMode mode);

struct ConstraintReport {
  double div_rhoFT_l2 = 0.0;
  double curl_compat_l2 = 0.0;
  double grad_rho_identity_l2 = 0.0;
  double force_equivalence_l2 = 0.0;
};

ConstraintReport constraint_report(const State& s);

/// integral of |rho det F - 1|; informational only.
double rho_detF_deviation(const State& s);

/// s' = nu^2 t, y = nu x, v = u / nu, r = rho, G = E. The samples are kept and
/// the box side becomes nu L. Throws std::invalid_argument for nu <= 0.
State scale_state(const State& s, double nu);

}  // namespace vela
