#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sdg/kernels.hpp"
#include "sdg/spectral.hpp"

namespace sdg {
namespace {

using kernels::Block;
using kernels::Reflector;
using kernels::Rotation;

template <typename T>
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> sub;      // sub[i] = T(i+1, i) after phase scaling; sub[n-1] = 0
  std::vector<Complex> phase;   // unitary diagonal scaling (all 1 for real input)
  std::vector<Reflector<T>> reflectors;
};

template <typename T>
T unit_phase(const T& x) {
  const double mag = std::abs(x);
  return mag > 0.0 ? x / mag : T{1};
}

// Householder reduction of a Hermitian matrix: a is consumed.
template <typename T>
Tridiagonal<T> tridiagonalize(DenseMatrix<T> a) {
  const std::size_t n = a.rows();
  Tridiagonal<T> t;
  t.diag.assign(n, 0.0);
  t.sub.assign(n, 0.0);
  t.phase.assign(n, Complex{1.0, 0.0});
  std::vector<T> raw_sub(n, T{});
  std::vector<T> p(n), w(n);

  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t m = n - j - 1;
    if (m >= 2) {
      Reflector<T> h;
      h.start = j + 1;
      h.u.resize(m);
      double tail2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        h.u[i] = a(j + 1 + i, j);
        if (i > 0) tail2 += kernels::abs2(h.u[i]);
      }
      const T x0 = h.u[0];
      if (tail2 == 0.0) {
        raw_sub[j] = x0;
      } else {
        const double xnorm = std::sqrt(kernels::abs2(x0) + tail2);
        const T gamma = -unit_phase(x0) * xnorm;
        h.u[0] = x0 - gamma;
        h.beta = 2.0 / (kernels::abs2(h.u[0]) + tail2);

        const Block<T> block{a.data(), n, j + 1, m};
        kernels::parallel::block_matvec(block, h.u.data(), p.data());
        T up{};
        for (std::size_t i = 0; i < m; ++i) {
          p[i] *= h.beta;
          up += kernels::conj_of(h.u[i]) * p[i];
        }
        const double half_k = 0.5 * h.beta * std::real(up);
        for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - half_k * h.u[i];
        kernels::parallel::block_rank2_update(block, h.u.data(), w.data());
        raw_sub[j] = gamma;
        t.reflectors.push_back(std::move(h));
      }
    } else {
      raw_sub[j] = a(j + 1, j);
    }
    t.diag[j] = std::real(a(j, j));
  }
  if (n > 0) t.diag[n - 1] = std::real(a(n - 1, n - 1));

  for (std::size_t j = 0; j + 1 < n; ++j) {
    if constexpr (std::is_same_v<T, double>) {
      t.sub[j] = raw_sub[j];
    } else {
      const double mag = std::abs(raw_sub[j]);
      t.sub[j] = mag;
      t.phase[j + 1] = mag > 0.0 ? t.phase[j] * (raw_sub[j] / mag) : t.phase[j];
    }
  }
  return t;
}

// Implicit QL on a symmetric tridiagonal matrix. When `rotations` is given,
// every Givens rotation is recorded so eigenvectors can be rebuilt per column.
void tridiagonal_ql(std::vector<double>& d, std::vector<double> e,
                    std::vector<Rotation>* rotations) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t cap = 30 * n;
  std::size_t iterations = 0;
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iterations > cap) {
          throw NumericError("eigh: QL iteration did not converge within " +
                             std::to_string(cap) + " iterations");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (rotations) rotations->push_back({static_cast<std::uint32_t>(i), c, s});
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<std::size_t> select_indices(const std::vector<double>& values, std::size_t k,
                                        EigenSelection which) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> chosen;
  switch (which) {
    case EigenSelection::smallest:
      chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    case EigenSelection::largest:
      chosen.assign(order.end() - static_cast<std::ptrdiff_t>(k), order.end());
      break;
    case EigenSelection::largest_magnitude: {
      std::vector<std::size_t> by_mag = order;
      std::stable_sort(by_mag.begin(), by_mag.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(values[a]);
        const double mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return values[a] > values[b];
      });
      by_mag.resize(k);
      std::stable_sort(by_mag.begin(), by_mag.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      chosen = std::move(by_mag);
      break;
    }
  }
  return chosen;
}

template <typename T>
EigenPairs solve(DenseMatrix<T> a, std::size_t k, EigenSelection which) {
  const std::size_t n = a.rows();
  if (k > n) throw ConfigError("eigh: k exceeds matrix size");
  EigenPairs out;
  out.vectors = ComplexMatrix(n, k);
  if (k == 0) return out;

  Tridiagonal<T> t = tridiagonalize(std::move(a));
  std::vector<double> d = t.diag;
  std::vector<Rotation> rotations;
  rotations.reserve(8 * n);
  tridiagonal_ql(d, t.sub, &rotations);

  const std::vector<std::size_t> chosen = select_indices(d, k, which);
  RealMatrix z(k, n);
  kernels::parallel::rotation_columns(rotations, n, chosen, z);

  DenseMatrix<T> y(k, n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<T, double>) {
        y(j, i) = z(j, i);
      } else {
        y(j, i) = t.phase[i] * z(j, i);
      }
    }
  }
  kernels::parallel::apply_reflectors<T>(t.reflectors, y);

  out.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = d[chosen[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = Complex(y(j, i));
  }
  return out;
}

void require_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ConfigError("eigh: matrix is not square");
  if (hermitian_defect(m) > 1e-12) throw ConfigError("eigh: matrix is not Hermitian");
}

}  // namespace

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double scale = 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      defect = std::max(defect, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

double frobenius_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const Complex& v : m.values()) acc += std::norm(v);
  return std::sqrt(acc);
}

EigenPairs eigh(const ComplexMatrix& m, std::size_t k, EigenSelection which) {
  require_hermitian(m);
  bool real = true;
  for (const Complex& v : m.values()) {
    if (v.imag() != 0.0) {
      real = false;
      break;
    }
  }
  if (real) {
    RealMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
    return solve(std::move(r), k, which);
  }
  return solve(m, k, which);
}

EigenPairs eigh(const SpectralMatrix& m, std::size_t k, EigenSelection which) {
  return eigh(m.entries, k, which);
}

EigenPairs eigh_real(const RealMatrix& m, std::size_t k, EigenSelection which) {
  if (m.rows() != m.cols()) throw ConfigError("eigh: matrix is not square");
  double scale = 0.0, defect = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      scale = std::max(scale, std::abs(m(i, j)));
      defect = std::max(defect, std::abs(m(i, j) - m(j, i)));
    }
  if (scale > 0.0 && defect / scale > 1e-12) throw ConfigError("eigh: matrix is not symmetric");
  return solve(m, k, which);
}

std::vector<double> eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m);
  auto t = tridiagonalize(m);
  std::vector<double> d = t.diag;
  tridiagonal_ql(d, t.sub, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace sdg
