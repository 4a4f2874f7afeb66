#include "vela/grid.hpp"

#include <numbers>
#include <string>

namespace vela {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
}

Grid Grid::make(int dim, int n, double length) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("grid: n must be a power of two >= 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid: length must be positive");
  return Grid(dim, n, length);
}

double Grid::volume() const { return std::pow(length_, dim_); }

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::k0() const { return 2.0 * std::numbers::pi / length_; }

std::array<int, 3> Grid::unflatten(std::size_t p) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = static_cast<int>(p % n_);
    p /= n_;
  }
  return idx;
}

double Grid::coordinate(std::size_t p, int axis) const {
  for (int a = 0; a < axis; ++a) p /= n_;
  return static_cast<double>(p % n_) * spacing();
}

TensorField identity_tensor(const Grid& grid) {
  TensorField t(grid);
  for (int i = 0; i < grid.dim(); ++i) t(i, i).assign(grid.size(), 1.0);
  return t;
}

double mean(const Array& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return a.empty() ? 0.0 : s / static_cast<double>(a.size());
}

}  // namespace vela
