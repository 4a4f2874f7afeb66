#pragma once

// Fourier machinery on the periodic grid: transforms, spectral derivatives,
// 2/3-rule dealiasing, the mean-zero inverse Laplacian and the Leray
// projector.
//
// Derivative symbols zero the Nyquist mode of the differentiated axis, and the
// Laplacian is defined as div(grad), so that every identity below is exact in
// floating point up to rounding:
//   laplacian == divergence . gradient
//   leray_project . leray_project == leray_project

#include <array>
#include <complex>
#include <vector>

#include "vela/grid.hpp"

namespace vela {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Integer wavevectors of the half-complex (r2c) layout for a (dim, n) pair.
/// The x axis carries only the non-negative half.
struct ModeTable {
  std::size_t count = 0;
  std::vector<std::array<int, 3>> k;      // signed integer wavenumbers
  std::vector<std::array<int, 3>> kd;     // derivative wavenumbers (Nyquist -> 0)
  std::vector<double> kd_sq;              // |kd|^2 in integer units
  std::vector<unsigned char> keep;        // 2/3 rule: every |k_a| <= floor(n/3)
};

const ModeTable& modes(const Grid& grid);

/// Forward transform normalised so that coefficient 0 is the spatial mean.
Spectrum forward(const Grid& grid, const Array& values);
/// Exact inverse of `forward`.
Array inverse(const Grid& grid, const Spectrum& coeffs);

/// Largest retained integer wavenumber under the 2/3 rule.
inline int dealias_cutoff(const Grid& grid) { return grid.n() / 3; }

Array derivative(const Grid& grid, const Array& f, int axis);
/// All first partials of one component, from a single forward transform.
std::vector<Array> partials(const Grid& grid, const Array& f);
Array dealias(const Grid& grid, const Array& f);
Array laplacian(const Grid& grid, const Array& f);
Array inverse_laplacian_meanzero(const Grid& grid, const Array& f);

VectorField gradient(const ScalarField& f);
/// (grad u)_ij = d u_i / d x_j
TensorField gradient(const VectorField& u);
ScalarField divergence(const VectorField& u);
/// Row-wise: (div T)_i = d_j T_ij
VectorField divergence(const TensorField& t);

template <int Rank>
Field<Rank> dealias(Field<Rank> f) {
  for (auto& c : f.comps()) c = dealias(f.grid(), c);
  return f;
}

template <int Rank>
Field<Rank> laplacian(Field<Rank> f) {
  for (auto& c : f.comps()) c = laplacian(f.grid(), c);
  return f;
}

/// Returns g with -laplacian(g) = f - mean(f) and mean(g) = 0, per component.
template <int Rank>
Field<Rank> inverse_laplacian_meanzero(Field<Rank> f) {
  for (auto& c : f.comps()) c = inverse_laplacian_meanzero(f.grid(), c);
  return f;
}

/// w - grad(laplacian^-1 div w)
VectorField leray_project(const VectorField& w);

}  // namespace vela
