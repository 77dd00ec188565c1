#pragma once

// Data-parallel inner loops. Each kernel exists twice: `serial` is the
// reference used by the tests, `parallel` is the OpenMP version used by the
// library. Every output element is computed by exactly one thread in the same
// order as the serial loop, so both produce bit-identical results for any
// thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sdg/common.hpp"

namespace sdg::kernels {

inline double conj_of(double x) noexcept { return x; }
inline Complex conj_of(const Complex& x) noexcept { return std::conj(x); }

inline double abs2(double x) noexcept { return x * x; }
inline double abs2(const Complex& x) noexcept { return std::norm(x); }

/// Givens rotation acting on coordinates (index, index + 1).
struct Rotation {
  std::uint32_t index;
  double c;
  double s;
};

/// Row-major square block view: element (r, c) of the trailing block that
/// starts at (offset, offset) of an lda-wide matrix.
template <typename T>
struct Block {
  T* base;
  std::size_t lda;
  std::size_t offset;
  std::size_t size;

  T* row(std::size_t r) const noexcept { return base + (offset + r) * lda + offset; }
};

/// inertia contribution and index of the nearest centroid
struct Assignment {
  std::size_t cluster;
  double distance2;
};

namespace detail {

template <typename T>
inline T block_row_dot(const Block<T>& b, std::size_t r, const T* u) noexcept {
  const T* row = b.row(r);
  T acc{};
  for (std::size_t c = 0; c < b.size; ++c) acc += row[c] * u[c];
  return acc;
}

template <typename T>
inline void block_row_rank2(const Block<T>& b, std::size_t r, const T* u, const T* w) noexcept {
  T* row = b.row(r);
  const T ur = u[r];
  const T wr = w[r];
  for (std::size_t c = 0; c < b.size; ++c) {
    row[c] -= ur * conj_of(w[c]) + wr * conj_of(u[c]);
  }
}

inline void rotate_column(std::span<const Rotation> rotations, std::size_t column,
                          double* out, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  out[column] = 1.0;
  // Z = G_1 G_2 ... G_N, so Z e_j applies the rotations last-to-first.
  for (std::size_t r = rotations.size(); r-- > 0;) {
    const Rotation& g = rotations[r];
    const double a = out[g.index];
    const double b = out[g.index + 1];
    out[g.index] = g.c * a + g.s * b;
    out[g.index + 1] = g.c * b - g.s * a;
  }
}

/// y <- (I - beta u u^H) y, u supported on [start, n).
template <typename T>
inline void reflect(T* y, const T* u, double beta, std::size_t start, std::size_t n) noexcept {
  T dot{};
  for (std::size_t i = start; i < n; ++i) dot += conj_of(u[i - start]) * y[i];
  dot *= beta;
  for (std::size_t i = start; i < n; ++i) y[i] -= u[i - start] * dot;
}

inline Assignment nearest(const RealMatrix& x, std::size_t i, const RealMatrix& centroids) noexcept {
  Assignment best{0, std::numeric_limits<double>::infinity()};
  const std::size_t d = x.cols();
  const double* xi = x.data() + i * d;
  for (std::size_t k = 0; k < centroids.rows(); ++k) {
    const double* ck = centroids.data() + k * d;
    double dist = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = xi[j] - ck[j];
      dist += diff * diff;
    }
    if (dist < best.distance2) best = {k, dist};
  }
  return best;
}

}  // namespace detail

/// Reflector descriptor: y <- (I - beta u u^H) y on coordinates [start, n).
template <typename T>
struct Reflector {
  std::vector<T> u;
  double beta = 0.0;
  std::size_t start = 0;
};

/// Fixed block size for reductions so partial sums never depend on threads.
inline constexpr std::size_t kReductionBlock = 256;

namespace serial {

template <typename T>
void block_matvec(const Block<T>& b, const T* u, T* p) {
  for (std::size_t r = 0; r < b.size; ++r) p[r] = detail::block_row_dot(b, r, u);
}

template <typename T>
void block_rank2_update(const Block<T>& b, const T* u, const T* w) {
  for (std::size_t r = 0; r < b.size; ++r) detail::block_row_rank2(b, r, u, w);
}

/// Columns `wanted` of the accumulated rotation product, written as rows of out.
inline void rotation_columns(std::span<const Rotation> rotations, std::size_t n,
                             std::span<const std::size_t> wanted, RealMatrix& out) {
  for (std::size_t j = 0; j < wanted.size(); ++j) {
    detail::rotate_column(rotations, wanted[j], out.data() + j * n, n);
  }
}

/// Applies reflectors last-to-first to each row of `vectors`.
template <typename T>
void apply_reflectors(std::span<const Reflector<T>> reflectors, DenseMatrix<T>& vectors) {
  const std::size_t n = vectors.cols();
  for (std::size_t j = 0; j < vectors.rows(); ++j) {
    T* y = vectors.data() + j * n;
    for (std::size_t r = reflectors.size(); r-- > 0;) {
      const auto& h = reflectors[r];
      if (h.beta != 0.0) detail::reflect(y, h.u.data(), h.beta, h.start, n);
    }
  }
}

inline void assign_nearest(const RealMatrix& x, const RealMatrix& centroids,
                           std::span<Assignment> out) {
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = detail::nearest(x, i, centroids);
}

/// Softmax-regression gradient blocks: for each block of kReductionBlock
/// samples, partial[b] gets sum_i x_i (p_i - y_i)^T laid out as classes x
/// (dim + 1), bias last; loss_partial[b] gets the summed cross-entropy.
void softmax_gradient_blocks(const RealMatrix& x, std::span<const int> y,
                             const RealMatrix& weights, std::vector<RealMatrix>& partial,
                             std::vector<double>& loss_partial);

}  // namespace serial

namespace parallel {

template <typename T>
void block_matvec(const Block<T>& b, const T* u, T* p) {
  const auto size = static_cast<std::ptrdiff_t>(b.size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < size; ++r) {
    p[r] = detail::block_row_dot(b, static_cast<std::size_t>(r), u);
  }
}

template <typename T>
void block_rank2_update(const Block<T>& b, const T* u, const T* w) {
  const auto size = static_cast<std::ptrdiff_t>(b.size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < size; ++r) {
    detail::block_row_rank2(b, static_cast<std::size_t>(r), u, w);
  }
}

inline void rotation_columns(std::span<const Rotation> rotations, std::size_t n,
                             std::span<const std::size_t> wanted, RealMatrix& out) {
  const auto count = static_cast<std::ptrdiff_t>(wanted.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    detail::rotate_column(rotations, wanted[static_cast<std::size_t>(j)],
                          out.data() + static_cast<std::size_t>(j) * n, n);
  }
}

template <typename T>
void apply_reflectors(std::span<const Reflector<T>> reflectors, DenseMatrix<T>& vectors) {
  const std::size_t n = vectors.cols();
  const auto count = static_cast<std::ptrdiff_t>(vectors.rows());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    T* y = vectors.data() + static_cast<std::size_t>(j) * n;
    for (std::size_t r = reflectors.size(); r-- > 0;) {
      const auto& h = reflectors[r];
      if (h.beta != 0.0) detail::reflect(y, h.u.data(), h.beta, h.start, n);
    }
  }
}

inline void assign_nearest(const RealMatrix& x, const RealMatrix& centroids,
                           std::span<Assignment> out) {
  const auto count = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = detail::nearest(x, static_cast<std::size_t>(i), centroids);
  }
}

void softmax_gradient_blocks(const RealMatrix& x, std::span<const int> y,
                             const RealMatrix& weights, std::vector<RealMatrix>& partial,
                             std::vector<double>& loss_partial);

}  // namespace parallel

}  // namespace sdg::kernels
