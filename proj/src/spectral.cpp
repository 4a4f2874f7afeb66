#include "vela/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace vela {

namespace {

// FFTW plans are created with FFTW_ESTIMATE so the chosen algorithm, and
// therefore every rounding error, is identical from run to run.
struct Plan {
  int dim = 0;
  int n = 0;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ModeTable table;
  std::mutex mutex;

  Plan(int d, int nn) : dim(d), n(nn) {
    real_size = 1;
    for (int a = 0; a < dim; ++a) real_size *= static_cast<std::size_t>(n);
    complex_size = real_size / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
    real_buf = fftw_alloc_real(real_size);
    cplx_buf = fftw_alloc_complex(complex_size);
    int dims[3] = {n, n, n};
    r2c = fftw_plan_dft_r2c(dim, dims, real_buf, cplx_buf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r(dim, dims, cplx_buf, real_buf, FFTW_ESTIMATE);
    build_table();
  }
  ~Plan() {
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real_buf);
    fftw_free(cplx_buf);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void build_table() {
    const int h = n / 2 + 1;
    const int cut = n / 3;
    table.count = complex_size;
    table.k.resize(complex_size);
    table.kd.resize(complex_size);
    table.kd_sq.resize(complex_size);
    table.keep.resize(complex_size);
    for (std::size_t c = 0; c < complex_size; ++c) {
      std::array<int, 3> idx{0, 0, 0};
      std::size_t rest = c;
      idx[0] = static_cast<int>(rest % h);
      rest /= h;
      for (int a = 1; a < dim; ++a) {
        idx[a] = static_cast<int>(rest % n);
        rest /= n;
      }
      std::array<int, 3> k{0, 0, 0};
      std::array<int, 3> kd{0, 0, 0};
      bool keep = true;
      double ksq = 0.0;
      for (int a = 0; a < dim; ++a) {
        k[a] = (a == 0 || idx[a] < n / 2) ? idx[a] : idx[a] - n;
        kd[a] = (std::abs(k[a]) == n / 2) ? 0 : k[a];
        if (std::abs(k[a]) > cut) keep = false;
        ksq += static_cast<double>(kd[a]) * kd[a];
      }
      table.k[c] = k;
      table.kd[c] = kd;
      table.kd_sq[c] = ksq;
      table.keep[c] = keep ? 1 : 0;
    }
  }
};

Plan& plan_for(const Grid& grid) {
  static std::mutex registry_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Plan>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto key = std::make_pair(grid.dim(), grid.n());
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::make_unique<Plan>(grid.dim(), grid.n())).first;
  return *it->second;
}

}  // namespace

const ModeTable& modes(const Grid& grid) { return plan_for(grid).table; }

Spectrum forward(const Grid& grid, const Array& values) {
  Plan& plan = plan_for(grid);
  if (values.size() != plan.real_size) throw std::invalid_argument("forward: size mismatch");
  std::lock_guard<std::mutex> lock(plan.mutex);
  std::copy(values.begin(), values.end(), plan.real_buf);
  fftw_execute(plan.r2c);
  const double scale = 1.0 / static_cast<double>(plan.real_size);
  Spectrum out(plan.complex_size);
  for (std::size_t c = 0; c < plan.complex_size; ++c)
    out[c] = Complex(plan.cplx_buf[c][0] * scale, plan.cplx_buf[c][1] * scale);
  return out;
}

Array inverse(const Grid& grid, const Spectrum& coeffs) {
  Plan& plan = plan_for(grid);
  if (coeffs.size() != plan.complex_size) throw std::invalid_argument("inverse: size mismatch");
  std::lock_guard<std::mutex> lock(plan.mutex);
  for (std::size_t c = 0; c < plan.complex_size; ++c) {
    plan.cplx_buf[c][0] = coeffs[c].real();
    plan.cplx_buf[c][1] = coeffs[c].imag();
  }
  fftw_execute(plan.c2r);
  return Array(plan.real_buf, plan.real_buf + plan.real_size);
}

namespace {

Spectrum times_ik(const Grid& grid, const Spectrum& f, int axis) {
  const ModeTable& m = modes(grid);
  const double k0 = grid.k0();
  Spectrum out(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) out[c] = f[c] * Complex(0.0, k0 * m.kd[c][axis]);
  return out;
}

}  // namespace

Array derivative(const Grid& grid, const Array& f, int axis) {
  return inverse(grid, times_ik(grid, forward(grid, f), axis));
}

std::vector<Array> partials(const Grid& grid, const Array& f) {
  const Spectrum fh = forward(grid, f);
  std::vector<Array> out;
  out.reserve(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) out.push_back(inverse(grid, times_ik(grid, fh, a)));
  return out;
}

Array dealias(const Grid& grid, const Array& f) {
  const ModeTable& m = modes(grid);
  Spectrum fh = forward(grid, f);
  for (std::size_t c = 0; c < fh.size(); ++c)
    if (!m.keep[c]) fh[c] = 0.0;
  return inverse(grid, fh);
}

Array laplacian(const Grid& grid, const Array& f) {
  const ModeTable& m = modes(grid);
  const double k0sq = grid.k0() * grid.k0();
  Spectrum fh = forward(grid, f);
  for (std::size_t c = 0; c < fh.size(); ++c) fh[c] *= -k0sq * m.kd_sq[c];
  return inverse(grid, fh);
}

Array inverse_laplacian_meanzero(const Grid& grid, const Array& f) {
  const ModeTable& m = modes(grid);
  const double k0sq = grid.k0() * grid.k0();
  Spectrum fh = forward(grid, f);
  for (std::size_t c = 0; c < fh.size(); ++c)
    fh[c] = m.kd_sq[c] > 0.0 ? fh[c] / (k0sq * m.kd_sq[c]) : Complex(0.0, 0.0);
  return inverse(grid, fh);
}

VectorField gradient(const ScalarField& f) {
  VectorField g(f.grid());
  auto parts = partials(f.grid(), f.values());
  for (int a = 0; a < f.dim(); ++a) g[a] = std::move(parts[a]);
  return g;
}

TensorField gradient(const VectorField& u) {
  TensorField g(u.grid());
  for (int i = 0; i < u.dim(); ++i) {
    auto parts = partials(u.grid(), u[i]);
    for (int j = 0; j < u.dim(); ++j) g(i, j) = std::move(parts[j]);
  }
  return g;
}

ScalarField divergence(const VectorField& u) {
  const Grid& grid = u.grid();
  Spectrum acc(modes(grid).count, Complex(0.0, 0.0));
  for (int j = 0; j < u.dim(); ++j) {
    const Spectrum d = times_ik(grid, forward(grid, u[j]), j);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += d[c];
  }
  ScalarField out(grid);
  out.values() = inverse(grid, acc);
  return out;
}

VectorField divergence(const TensorField& t) {
  const Grid& grid = t.grid();
  VectorField out(grid);
  for (int i = 0; i < t.dim(); ++i) {
    Spectrum acc(modes(grid).count, Complex(0.0, 0.0));
    for (int j = 0; j < t.dim(); ++j) {
      const Spectrum d = times_ik(grid, forward(grid, t(i, j)), j);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += d[c];
    }
    out[i] = inverse(grid, acc);
  }
  return out;
}

VectorField leray_project(const VectorField& w) {
  const Grid& grid = w.grid();
  const ModeTable& m = modes(grid);
  const int d = grid.dim();
  std::vector<Spectrum> wh;
  for (int i = 0; i < d; ++i) wh.push_back(forward(grid, w[i]));
  for (std::size_t c = 0; c < m.count; ++c) {
    if (m.kd_sq[c] == 0.0) continue;
    Complex kdotw(0.0, 0.0);
    for (int j = 0; j < d; ++j) kdotw += static_cast<double>(m.kd[c][j]) * wh[j][c];
    const Complex s = kdotw / m.kd_sq[c];
    for (int i = 0; i < d; ++i) wh[i][c] -= static_cast<double>(m.kd[c][i]) * s;
  }
  VectorField out(grid);
  for (int i = 0; i < d; ++i) out[i] = inverse(grid, wh[i]);
  return out;
}

}  // namespace vela
