#pragma once

// Rectangle-rule quadrature norms on the periodic grid. Pointwise magnitude
// is the Euclidean (Frobenius) norm over components. Sums run in storage
// order, so results do not depend on any parallel decomposition.

#include <limits>
#include <vector>

#include "vela/grid.hpp"

namespace vela {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (sum_p |f(p)|^q h^d)^(1/q), or max_p |f(p)| when q is infinite.
double lq_norm(const Grid& grid, const std::vector<Array>& comps, double q);
/// L^q norm of f plus L^q norm of its full first-derivative tensor.
double w1q_norm(const Grid& grid, const std::vector<Array>& comps, double q);

template <int Rank>
double lq_norm(const Field<Rank>& f, double q) {
  return lq_norm(f.grid(), f.comps(), q);
}
template <int Rank>
double w1q_norm(const Field<Rank>& f, double q) {
  return w1q_norm(f.grid(), f.comps(), q);
}

/// integral of |grad u|^2
double h1_seminorm_sq(const VectorField& u);

double integral(const ScalarField& f);
/// integral of f . g summed over components
template <int Rank>
double inner(const Field<Rank>& f, const Field<Rank>& g) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (std::size_t p = 0; p < f.grid().size(); ++p) s += f.comp(c)[p] * g.comp(c)[p];
  return s * f.grid().cell_volume();
}

}  // namespace vela
