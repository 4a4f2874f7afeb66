#include "vela/initial.hpp"

#include <cmath>
#include <vector>

#include "vela/dynamics.hpp"
#include "vela/spectral.hpp"

namespace vela {

namespace {

std::vector<std::array<int, 3>> wavevectors(int dim, int kmax) {
  std::vector<std::array<int, 3>> ks;
  const int kz = dim == 3 ? kmax : 0;
  for (int c = -kz; c <= kz; ++c)
    for (int b = -kmax; b <= kmax; ++b)
      for (int a = -kmax; a <= kmax; ++a) {
        if (a == 0 && b == 0 && c == 0) continue;
        ks.push_back({a, b, c});
      }
  return ks;
}

}  // namespace

ScalarField random_bandlimited(const Grid& grid, int kmax, double amplitude, Rng& rng) {
  const auto ks = wavevectors(grid.dim(), kmax);
  const double scale = amplitude / static_cast<double>(ks.size()) * 4.0;
  std::vector<double> ac(ks.size()), bs(ks.size());
  for (std::size_t m = 0; m < ks.size(); ++m) {
    ac[m] = scale * rng.uniform(-1.0, 1.0);
    bs[m] = scale * rng.uniform(-1.0, 1.0);
  }
  const double k0 = grid.k0();
  return sample(grid, [&](const std::array<double, 3>& x) {
    double v = 0.0;
    for (std::size_t m = 0; m < ks.size(); ++m) {
      const double ph = k0 * (ks[m][0] * x[0] + ks[m][1] * x[1] + ks[m][2] * x[2]);
      v += ac[m] * std::cos(ph) + bs[m] * std::sin(ph);
    }
    return v;
  });
}

VectorField random_bandlimited_vector(const Grid& grid, int kmax, double amplitude, Rng& rng) {
  VectorField v(grid);
  for (int i = 0; i < grid.dim(); ++i) v[i] = random_bandlimited(grid, kmax, amplitude, rng).values();
  return v;
}

TensorField random_bandlimited_tensor(const Grid& grid, int kmax, double amplitude, Rng& rng) {
  TensorField t(grid);
  for (int c = 0; c < t.components(); ++c) t.comp(c) = random_bandlimited(grid, kmax, amplitude, rng).values();
  return t;
}

VectorField taylor_green(const Grid& grid, double amplitude) {
  const double k0 = grid.k0();
  VectorField u(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double x = k0 * grid.coordinate(p, 0);
    const double y = k0 * grid.coordinate(p, 1);
    const double cz = grid.dim() == 3 ? std::cos(k0 * grid.coordinate(p, 2)) : 1.0;
    u[0][p] = amplitude * std::sin(x) * std::cos(y) * cz;
    u[1][p] = -amplitude * std::cos(x) * std::sin(y) * cz;
  }
  return u;
}

State constraint_compatible_state(const Grid& grid, double amplitude, std::uint64_t seed, int steps) {
  Rng rng(seed);
  State s = equilibrium_state(grid);
  // Generic random components carry both a gradient and a solenoidal part,
  // so the transported density is non-uniform.
  const VectorField w = random_bandlimited_vector(grid, 1, amplitude, rng);
  const double h = 1.0 / steps;

  auto rates = [&](const State& x) {
    State y = x;
    y.u = w;
    return std::make_pair(continuity_rhs(y, Mode::compressible), deformation_rhs(y));
  };
  for (int n = 0; n < steps; ++n) {
    const auto [r1, e1] = rates(s);
    State s2 = s;
    s2.rho.axpy(0.5 * h, r1);
    s2.E.axpy(0.5 * h, e1);
    const auto [r2, e2] = rates(s2);
    State s3 = s;
    s3.rho.axpy(0.5 * h, r2);
    s3.E.axpy(0.5 * h, e2);
    const auto [r3, e3] = rates(s3);
    State s4 = s;
    s4.rho.axpy(h, r3);
    s4.E.axpy(h, e3);
    const auto [r4, e4] = rates(s4);
    s.rho.axpy(h / 6.0, r1);
    s.rho.axpy(h / 3.0, r2);
    s.rho.axpy(h / 3.0, r3);
    s.rho.axpy(h / 6.0, r4);
    s.E.axpy(h / 6.0, e1);
    s.E.axpy(h / 3.0, e2);
    s.E.axpy(h / 3.0, e3);
    s.E.axpy(h / 6.0, e4);
  }
  s.u = VectorField(grid);
  s.t = 0.0;
  return s;
}

State taylor_green_perturbed(const Grid& grid, double delta, std::uint64_t seed, bool compatible) {
  State s = compatible ? constraint_compatible_state(grid, delta, seed) : equilibrium_state(grid);
  s.u = leray_project(taylor_green(grid, delta));
  if (!compatible) {
    Rng rng(seed);
    s.rho.values() = random_bandlimited(grid, 2, delta, rng).values();
    for (double& x : s.rho.values()) x += 1.0;
    const TensorField raw = random_bandlimited_tensor(grid, 2, delta, rng);
    for (int i = 0; i < grid.dim(); ++i)
      for (int j = 0; j < grid.dim(); ++j)
        for (std::size_t p = 0; p < grid.size(); ++p) s.E(i, j)[p] = 0.5 * (raw(i, j)[p] + raw(j, i)[p]);
  }
  return s;
}

}  // namespace vela
