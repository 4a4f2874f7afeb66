#pragma once

// Manufactured solutions: analytic states built from a few Fourier modes,
// the forcing that makes them exact solutions of the forced system, and
// convergence studies against them.

#include <array>
#include <vector>

#include "vela/dynamics.hpp"

namespace vela {

/// One term amplitude * cos(k0 k.x + phase + omega t). `amplitude` has one
/// entry per field component (1, d or d*d, tensor row-major).
struct FourierMode {
  std::array<int, 3> k{0, 0, 0};
  std::vector<double> amplitude;
  double phase = 0.0;
  double omega = 0.0;
};

struct ManufacturedSpec {
  int dim = 2;
  Mode mode = Mode::incompressible;
  double eps = 1e-2;
  std::vector<FourierMode> rho;  // modes of rho - 1
  std::vector<FourierMode> u;    // projected perpendicular to k in incompressible mode
  std::vector<FourierMode> E;

  /// Throws std::invalid_argument on malformed modes or when the density
  /// bound 1 - eps * sum |a| falls below 0.5.
  void validate() const;
};

/// 2-D, three modes per field with |k_a| <= 1, eps = 1e-2, omega = 1.
ManufacturedSpec standard_spec(Mode mode = Mode::incompressible);

struct ManufacturedFields {
  State state;
  TimeDerivatives derivatives;
};

/// Analytic samples and analytic time derivatives at time t. Throws
/// std::invalid_argument if a mode lies above the dealias cutoff of `grid`.
ManufacturedFields manufactured_fields(const ManufacturedSpec& spec, const Grid& grid, double t);

/// residual(manufactured state, analytic derivatives); the manufactured state
/// solves the system forced by this.
SystemResidual manufactured_forcing(const ManufacturedSpec& spec, const Grid& grid, double t,
                                    const StepConfig& cfg);

/// StepConfig copy with `forcing` set for `spec`.
StepConfig forced_config(const ManufacturedSpec& spec, StepConfig cfg);

struct FieldErrors {
  double rho = 0.0;
  double u = 0.0;
  double E = 0.0;
};

struct ConvergenceReport {
  std::vector<double> dts;
  std::vector<int> ns;
  /// L2 error at t_end of runs at n = ns.back(), one entry per dt.
  std::vector<FieldErrors> temporal_errors;
  /// L2 defect of the forced semi-discrete right-hand side against the
  /// analytic time derivatives at t_end, one entry per n.
  std::vector<FieldErrors> spatial_errors;
  FieldErrors temporal_order;
};

struct StudyConfig {
  StepConfig step;
  double length = 6.283185307179586;
  double t_end = 1.0;
  std::vector<double> dts{0.04, 0.02, 0.01};
  std::vector<int> ns{16, 32};
};

/// Least-squares slope of log(y) against log(x).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// Requires at least 3 dt values and 2 n values (std::invalid_argument).
/// Solver failures are rethrown as NumericalAbort naming n and dt.
ConvergenceReport convergence_study(const ManufacturedSpec& spec, const StudyConfig& study);

}  // namespace vela
