#pragma once

// Periodic box [0, L)^d and the sampled field types that live on it.
//
// Storage is one contiguous array per component, x-fastest:
//   index = i0 + n * (i1 + n * i2).

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vela {

using Array = std::vector<double>;

class Grid {
 public:
  /// Validating constructor. Throws std::invalid_argument unless dim is 2 or
  /// 3, n is a power of two >= 8 and length > 0.
  static Grid make(int dim, int n, double length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double volume() const;
  double cell_volume() const;
  std::size_t size() const { return size_; }
  /// Base wavenumber 2*pi/L.
  double k0() const;

  /// Per-axis node indices of a linear index.
  std::array<int, 3> unflatten(std::size_t p) const;
  /// Physical coordinate of node p along one axis (x_j = j * L / n).
  double coordinate(std::size_t p, int axis) const;

  /// Same samples, different box side (used by the scaling transform).
  Grid with_length(double length) const { return make(dim_, n_, length); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  Grid(int dim, int n, double length);
  int dim_ = 2;
  int n_ = 8;
  double length_ = 1.0;
  std::size_t size_ = 64;
};

inline Grid make_grid(int dim, int n, double length) { return Grid::make(dim, n, length); }

/// Sampled field with `Rank` tensor indices: 0 scalar, 1 vector, 2 tensor.
/// Tensor components are row-major: component (i, j) is stored at i*dim + j.
template <int Rank>
class Field {
  static_assert(Rank >= 0 && Rank <= 2);

 public:
  static constexpr int rank = Rank;

  explicit Field(const Grid& grid, double fill = 0.0)
      : grid_(grid), comps_(count(grid.dim()), Array(grid.size(), fill)) {}

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  int components() const { return static_cast<int>(comps_.size()); }
  static int count(int dim) { return Rank == 0 ? 1 : Rank == 1 ? dim : dim * dim; }

  Array& comp(int c) { return comps_[c]; }
  const Array& comp(int c) const { return comps_[c]; }
  std::vector<Array>& comps() { return comps_; }
  const std::vector<Array>& comps() const { return comps_; }

  Array& values() requires(Rank == 0) { return comps_[0]; }
  const Array& values() const requires(Rank == 0) { return comps_[0]; }
  double& operator[](std::size_t p) requires(Rank == 0) { return comps_[0][p]; }
  double operator[](std::size_t p) const requires(Rank == 0) { return comps_[0][p]; }

  Array& operator[](int i) requires(Rank == 1) { return comps_[i]; }
  const Array& operator[](int i) const requires(Rank == 1) { return comps_[i]; }

  Array& operator()(int i, int j) requires(Rank == 2) { return comps_[i * dim() + j]; }
  const Array& operator()(int i, int j) const requires(Rank == 2) { return comps_[i * dim() + j]; }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (std::size_t c = 0; c < comps_.size(); ++c)
      for (std::size_t p = 0; p < comps_[c].size(); ++p) comps_[c][p] += o.comps_[c][p];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (std::size_t c = 0; c < comps_.size(); ++c)
      for (std::size_t p = 0; p < comps_[c].size(); ++p) comps_[c][p] -= o.comps_[c][p];
    return *this;
  }
  Field& operator*=(double a) {
    for (auto& c : comps_)
      for (auto& x : c) x *= a;
    return *this;
  }
  /// this += a * o
  Field& axpy(double a, const Field& o) {
    check_same(o);
    for (std::size_t c = 0; c < comps_.size(); ++c)
      for (std::size_t p = 0; p < comps_[c].size(); ++p) comps_[c][p] += a * o.comps_[c][p];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

  /// Relabel the geometry without touching the samples.
  void set_grid(const Grid& g) {
    if (g.dim() != grid_.dim() || g.n() != grid_.n())
      throw std::invalid_argument("set_grid: sample layout mismatch");
    grid_ = g;
  }

  bool all_finite() const;

 private:
  void check_same(const Field& o) const {
    if (!(o.grid_ == grid_)) throw std::invalid_argument("field grid mismatch");
  }

  Grid grid_;
  std::vector<Array> comps_;
};

using ScalarField = Field<0>;
using VectorField = Field<1>;
using TensorField = Field<2>;

template <int Rank>
bool Field<Rank>::all_finite() const {
  for (const auto& c : comps_)
    for (double x : c)
      if (!std::isfinite(x)) return false;
  return true;
}

/// Identity tensor field.
TensorField identity_tensor(const Grid& grid);

/// Pointwise scale of every component by a scalar field.
template <int Rank>
Field<Rank> pointwise_scale(const ScalarField& s, Field<Rank> f) {
  for (auto& c : f.comps())
    for (std::size_t p = 0; p < c.size(); ++p) c[p] *= s[p];
  return f;
}

/// Spatial mean of one component.
double mean(const Array& a);

/// Fill a scalar field from a function of the node coordinates.
template <class Fn>
ScalarField sample(const Grid& grid, Fn&& fn) {
  ScalarField f(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(p, a);
    f[p] = fn(x);
  }
  return f;
}

}  // namespace vela
