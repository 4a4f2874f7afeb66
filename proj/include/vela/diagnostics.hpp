#pragma once

// Exact identities of the model evaluated on discrete states: energy ledger,
// conservation of the integral of rho tr E, sigma = grad ln rho transport,
// the Z = u - (1/mu) lap^-1 div E heat-equation identity and the pressure
// Poisson identity.

#include "vela/dynamics.hpp"
#include "vela/state.hpp"

namespace vela {

struct EnergyReport {
  double kinetic = 0.0;          // 1/2 int rho |u|^2
  double elastic_E = 0.0;        // 1/2 int rho |E|^2
  double elastic_F = 0.0;        // 1/2 int rho |F|^2
  double potential = 0.0;        // int Pi(rho)
  double dissipation_cum = 0.0;  // mu int_0^t int |grad u|^2
  double balance_residual = 0.0;

  /// kinetic + elastic_E + potential
  double total() const { return kinetic + elastic_E + potential; }
};

/// Instantaneous terms of the ledger. balance_residual is
/// total(t) + dissipation_cum - initial_total.
EnergyReport energy_report(const State& s, const PressureLaw& law, double dissipation_cum,
                           double initial_total);

/// int rho tr E
double tr_integral(const State& s);
/// || d_t(rho tr E) ||_2 with the time derivatives from the right-hand sides.
/// Only the integral is conserved, so this is informational.
double tr_pointwise_defect(const State& s, const StepConfig& cfg);

/// grad ln rho
VectorField sigma_from_density(const ScalarField& rho);
/// Advances sigma over one step of the state integrator (same stages).
VectorField sigma_step(const VectorField& sigma, const State& s, const StepConfig& cfg);
/// || sigma - grad ln rho ||_2
double sigma_consistency(const VectorField& sigma, const State& s);

struct ZFields {
  VectorField Z1;  // lap^-1 div E (mean zero)
  VectorField Z;   // u - Z1 / mu
};

ZFields compute_Z(const State& s, double mu);

struct IdentityResidual {
  double l2 = 0.0;
  /// Set when the input violates div(rho F^T) = 0 beyond `constraint_tol`,
  /// in which case a large residual is expected.
  bool constraint_warning = false;
};

inline constexpr double kConstraintWarnTol = 1e-6;

/// || d_t Z - mu lap Z - (F1 - F2) ||_2 with d_t u from momentum_rhs and
/// d_t Z1 from deformation_rhs. The pressure in F1 is P(rho) + q.
IdentityResidual z_parabolic_residual(const State& s, const StepConfig& cfg);

/// || lap(P + q) + lap rho - div div(rho E E^T) + div(rho u.grad u)
///    + div((rho - 1) d_t u) ||_2
IdentityResidual pressure_poisson_residual(const State& s, const MomentumRhs& m,
                                           const PressureLaw& law);
IdentityResidual pressure_poisson_residual(const State& s, const StepConfig& cfg);

struct TrackedNorms {
  double u_l2 = 0.0, u_lq = 0.0, u_w1q = 0.0, u_h1semi = 0.0;
  double rho_m1_l2 = 0.0, rho_m1_lq = 0.0, rho_m1_w1q = 0.0;
  double E_l2 = 0.0, E_lq = 0.0, E_w1q = 0.0;
};

TrackedNorms tracked_norms(const State& s, double q);

struct DiagnosticsReport {
  double time = 0.0;
  EnergyReport energy;
  ConstraintReport constraints;
  double tr_integral = 0.0;
  double sigma_consistency_l2 = 0.0;
  double z_residual_l2 = 0.0;
  double pressure_poisson_residual_l2 = 0.0;
  TrackedNorms norms;
  double rho_min = 1.0;
  double rho_max = 1.0;
  double cfl = 0.0;
};

/// Accumulators owned by the run loop.
struct LedgerAccumulators {
  double dissipation_cum = 0.0;
  double initial_energy = 0.0;
};

DiagnosticsReport make_report(const State& s, const VectorField* sigma, const LedgerAccumulators& acc,
                              const StepConfig& cfg, double q_norm = 4.0);

}  // namespace vela
