#pragma once

// Initial states and the seeded generator behind every random field.
//
// Randomness comes from std::mt19937_64 (its output sequence is fixed by the
// C++ standard) converted to doubles by taking the top 53 bits, so the same
// seed gives the same fields on every platform.

#include <cstdint>
#include <random>

#include "vela/state.hpp"

namespace vela {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// sum over integer wavevectors |k_a| <= kmax of a_k cos(k.x) + b_k sin(k.x),
/// coefficients uniform in [-amplitude, amplitude] / (number of modes).
ScalarField random_bandlimited(const Grid& grid, int kmax, double amplitude, Rng& rng);
VectorField random_bandlimited_vector(const Grid& grid, int kmax, double amplitude, Rng& rng);
TensorField random_bandlimited_tensor(const Grid& grid, int kmax, double amplitude, Rng& rng);

/// 2-D: (sin x cos y, -cos x sin y); 3-D: (sin x cos y cos z, -cos x sin y cos z, 0),
/// in units of the base wavenumber.
VectorField taylor_green(const Grid& grid, double amplitude = 1.0);

/// (rho, E) compatible with div(rho F^T) = 0 and the curl identity, obtained
/// by transporting the equilibrium with a fixed smooth compressive velocity of
/// size `amplitude` for unit time (classical RK4, `steps` steps). u is zero.
State constraint_compatible_state(const Grid& grid, double amplitude, std::uint64_t seed, int steps = 200);

/// u = delta * TG. With `compatible`, (rho, E) come from
/// constraint_compatible_state; otherwise rho = 1 + delta s1 and
/// E = delta sym(s2) for random band-limited s1, s2.
State taylor_green_perturbed(const Grid& grid, double delta, std::uint64_t seed, bool compatible);

}  // namespace vela
