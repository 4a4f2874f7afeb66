#pragma once

// Plain-text run configuration: `key = value` lines, '#' starts a comment.

#include <cstdint>
#include <string>
#include <vector>

#include "vela/dynamics.hpp"

namespace vela {

enum class InitKind { equilibrium, taylor_green_perturbed, constraint_compatible, checkpoint, manufactured };

struct CheckTolerances {
  double constraint = 1e-6;
  double curl = 1e-6;
  double grad_rho = 1e-6;
  double force = 1e-10;
  double z = 1e-8;
  double pressure_poisson = 1e-8;
};

struct RunConfig {
  int dim = 2;
  int n = 64;
  double length = 6.283185307179586;
  double mu = 0.1;
  double gamma = 2.0;
  double pressure_A = 1.0;
  Mode mode = Mode::incompressible;
  double dt = 1e-3;
  double t_end = 1.0;
  int output_every = 10;
  double q_norm = 4.0;
  Scheme scheme = Scheme::imex2;
  bool dealias = true;
  bool evolve_E = true;
  InitKind init = InitKind::taylor_green_perturbed;
  double delta = 1e-2;
  std::uint64_t seed = 1;
  /// Compatible (rho, E) for taylor_green_perturbed.
  bool compatible = true;
  double pressure_tol = 1e-10;
  int pressure_max_iter = 200;

  std::string csv = "vela.csv";
  std::string checkpoint_out;
  std::string checkpoint_in;

  CheckTolerances tol;

  std::vector<double> mms_dts{0.04, 0.02, 0.01};
  std::vector<int> mms_ns{16, 32};
  double mms_t_end = 1.0;

  /// Non-fatal notes produced while parsing (e.g. q_norm outside (3, 6]).
  std::vector<std::string> warnings;

  StepConfig step_config() const;
};

/// Parses and validates. Throws ConfigError naming the key and line for
/// unknown keys, malformed values and violated constraints.
RunConfig parse_config(const std::string& text);
/// Reads the file and parses it; unreadable files are a ConfigError.
RunConfig load_config(const std::string& path);

std::string to_string(InitKind k);

}  // namespace vela
