#include "vela/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "vela/spectral.hpp"

namespace vela {

double lq_norm(const Grid& grid, const std::vector<Array>& comps, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  const std::size_t np = grid.size();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      double s = 0.0;
      for (const auto& c : comps) s += c[p] * c[p];
      m = std::max(m, std::sqrt(s));
    }
    return m;
  }
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double s = 0.0;
    for (const auto& c : comps) s += c[p] * c[p];
    acc += (q == 2.0) ? s : std::pow(std::sqrt(s), q);
  }
  return std::pow(acc * grid.cell_volume(), 1.0 / q);
}

double w1q_norm(const Grid& grid, const std::vector<Array>& comps, double q) {
  std::vector<Array> grads;
  grads.reserve(comps.size() * grid.dim());
  for (const auto& c : comps)
    for (auto& d : partials(grid, c)) grads.push_back(std::move(d));
  return lq_norm(grid, comps, q) + lq_norm(grid, grads, q);
}

double h1_seminorm_sq(const VectorField& u) {
  const TensorField g = gradient(u);
  double acc = 0.0;
  for (const auto& c : g.comps())
    for (double x : c) acc += x * x;
  return acc * u.grid().cell_volume();
}

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values()) s += x;
  return s * f.grid().cell_volume();
}

}  // namespace vela
