#pragma once

// Right-hand sides of the viscoelastic system
//   rho_t + div(rho u) = 0
//   (rho u)_t + div(rho u (x) u) - mu lap u + grad P(rho) = div(rho F F^T)
//   E_t + u . grad E = grad u E + grad u
// in incompressible (div u = 0, multiplier q) and compressible (q = 0) modes,
// plus the IMEX time integrator.

#include <functional>
#include <optional>

#include "vela/grid.hpp"
#include "vela/state.hpp"

namespace vela {

enum class Mode { incompressible, compressible };
enum class Scheme { imex2, imex1 };

/// Triple of fields shaped like the unknowns. Used for time derivatives,
/// system residuals and manufactured forcing.
struct FieldTriple {
  ScalarField rho;
  VectorField u;
  TensorField E;
  explicit FieldTriple(const Grid& g) : rho(g), u(g), E(g) {}
};

/// Candidate time derivatives (d_t rho, d_t u, d_t E).
using TimeDerivatives = FieldTriple;

struct SystemResidual {
  ScalarField continuity;
  VectorField momentum;
  TensorField deformation;
  explicit SystemResidual(const Grid& g) : continuity(g), momentum(g), deformation(g) {}
};

/// Source terms added to the right-hand sides; their meaning matches
/// SystemResidual (continuity, conservative momentum, deformation).
using ForcingFn = std::function<SystemResidual(const Grid&, double t)>;

struct StepConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::imex2;
  Mode mode = Mode::incompressible;
  double mu = 0.1;
  PressureLaw law{};
  double pressure_tol = 1e-10;
  int pressure_max_iter = 200;
  bool dealias = true;
  /// false freezes E (the Navier-Stokes reduction with E = 0).
  bool evolve_E = true;
  ForcingFn forcing;

  /// Throws std::invalid_argument on dt <= 0, mu <= 0 or non-positive tolerances.
  void validate() const;
};

ScalarField continuity_rhs(const State& s, Mode mode, bool dealias = true);
/// -u . grad E + grad u E + grad u
TensorField deformation_rhs(const State& s, bool dealias = true);

struct PressureSolution {
  ScalarField q;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves div((1/rho) grad q) = div(w) for mean-zero q by fixed-point
/// iteration preconditioned with the constant-coefficient inverse Laplacian.
/// The residual is measured relative to ||div w|| + sum_a ||d_a w_a||, so a
/// nearly solenoidal w does not push the target below round-off.
/// Throws NumericalAbort(pressure) without convergence in pressure_max_iter.
PressureSolution pressure_solve(const State& s, const VectorField& w, const StepConfig& cfg);

struct MomentumRhs {
  VectorField dudt;
  ScalarField q;  // multiplier; zero in compressible mode
  int pressure_iterations = 0;
};

/// d_t u = (1/rho)[-rho (u.grad)u + mu lap u - grad P(rho) + div(rho F F^T) - grad q]
/// with forcing terms (f_m - u f_rho)/rho when supplied.
MomentumRhs momentum_rhs_detail(const State& s, const StepConfig& cfg,
                                const SystemResidual* forcing = nullptr);
VectorField momentum_rhs(const State& s, const StepConfig& cfg);

struct ResidualOptions {
  double mu = 0.1;
  PressureLaw law{};
  /// Coefficients of grad P and div(rho F F^T); nu^-2 for the scaled system.
  double pressure_scale = 1.0;
  double elastic_scale = 1.0;
  /// Added to P(rho) inside the pressure gradient (incompressible multiplier).
  const ScalarField* multiplier = nullptr;
};

/// Pointwise defects of the raw (conservative) equations:
///   continuity  = rho_t + div(rho u)
///   momentum    = (rho u)_t + div(rho u (x) u) - mu lap u + grad P - div(rho F F^T)
///   deformation = E_t + u . grad E - grad u E - grad u
SystemResidual residual(const State& s, const TimeDerivatives& d, const ResidualOptions& opt);

/// Time derivatives of the scaled state: d_s = nu^-2 d_t and v = u / nu.
TimeDerivatives scale_time_derivatives(const TimeDerivatives& d, double nu);

/// max |u| dt / h
double cfl_number(const State& s, double dt);

struct StepOutput {
  State state;
  /// mu * integral of |grad u|^2 integrated over the step with the scheme's
  /// stage weights.
  double dissipation = 0.0;
  std::optional<VectorField> sigma;
  double cfl = 0.0;
  int pressure_iterations = 0;
};

/// Advances (rho, u, E) by dt. The viscous term mu lap u is integrated exactly
/// by a spectral integrating factor; everything else is explicit (Heun for
/// imex2, forward Euler for imex1). In incompressible mode u is projected
/// after every stage. When `sigma` is given it is carried along with the same
/// stages under d_t sigma + grad(u . sigma) = 0.
/// Throws NumericalAbort on CFL > 1, loss of density positivity or pressure
/// divergence.
StepOutput advance(const State& s, const StepConfig& cfg, const VectorField* sigma = nullptr);

inline State step(const State& s, const StepConfig& cfg) { return advance(s, cfg).state; }

}  // namespace vela
