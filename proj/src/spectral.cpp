#include "sdg/spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace sdg {
namespace {

RealMatrix dense_adjacency(const SignedDirectedGraph& g) {
  RealMatrix a(g.num_nodes(), g.num_nodes());
  for (const Edge& e : g.edges()) a(e.src, e.dst) = e.weight;
  return a;
}

std::vector<double> inverse_sqrt(const std::vector<double>& degree) {
  std::vector<double> out(degree.size(), 0.0);
  for (std::size_t i = 0; i < degree.size(); ++i) {
    if (degree[i] > 0.0) out[i] = 1.0 / std::sqrt(degree[i]);
  }
  return out;
}

// L = D - H, or I - D^{-1/2} H D^{-1/2}; H must already be exactly Hermitian.
ComplexMatrix laplacian_from(const ComplexMatrix& h, const std::vector<double>& degree,
                             bool normalized) {
  const std::size_t n = h.rows();
  ComplexMatrix l(n, n);
  if (normalized) {
    const std::vector<double> s = inverse_sqrt(degree);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) l(i, j) = -(s[i] * s[j]) * h(i, j);
      l(i, i) += 1.0;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) l(i, j) = -h(i, j);
      l(i, i) += degree[i];
    }
  }
  // Diagonal entries of a Hermitian matrix are real.
  for (std::size_t i = 0; i < n; ++i) l(i, i) = Complex(l(i, i).real(), 0.0);
  return l;
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 0.5)) throw ConfigError("magnetic Laplacian: q must lie in [0, 0.5]");
}

}  // namespace

std::string_view to_string(SpectralKind kind) {
  switch (kind) {
    case SpectralKind::normalized_laplacian: return "normalized_laplacian";
    case SpectralKind::signed_laplacian: return "signed_laplacian";
    case SpectralKind::signed_laplacian_sym: return "signed_laplacian_sym";
    case SpectralKind::magnetic_laplacian: return "magnetic_laplacian";
    case SpectralKind::signed_magnetic_laplacian: return "signed_magnetic_laplacian";
    case SpectralKind::hermitian_imbalance: return "hermitian_imbalance";
  }
  return "unknown";
}

bool SpectralMatrix::is_real() const noexcept {
  for (const Complex& v : entries.values())
    if (v.imag() != 0.0) return false;
  return true;
}

SpectralMatrix normalized_laplacian(const SignedDirectedGraph& g) {
  const std::size_t n = g.num_nodes();
  RealMatrix a = dense_adjacency(g);
  ComplexMatrix h(n, n);
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = 0.5 * (std::abs(a(i, j)) + std::abs(a(j, i)));
      h(i, j) = v;
      degree[i] += v;
    }
  }
  return {laplacian_from(h, degree, true), SpectralKind::normalized_laplacian, true, 0.0};
}

SpectralMatrix signed_laplacian(const SignedDirectedGraph& g, bool normalized) {
  const std::size_t n = g.num_nodes();
  RealMatrix a = dense_adjacency(g);
  ComplexMatrix h(n, n);
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      h(i, j) = v;
      degree[i] += std::abs(v);
    }
  }
  return {laplacian_from(h, degree, normalized),
          normalized ? SpectralKind::signed_laplacian_sym : SpectralKind::signed_laplacian,
          normalized, 0.0};
}

SpectralMatrix magnetic_laplacian(const SignedDirectedGraph& g, double q, bool normalized) {
  check_q(q);
  for (const Edge& e : g.edges()) {
    if (e.weight < 0.0) {
      throw ConfigError(
          "magnetic Laplacian requires nonnegative weights; use signed_magnetic_laplacian");
    }
  }
  const std::size_t n = g.num_nodes();
  RealMatrix a = dense_adjacency(g);
  ComplexMatrix h(n, n);
  std::vector<double> degree(n, 0.0);
  const double two_pi_q = 2.0 * std::numbers::pi * q;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double mag = 0.5 * (a(i, j) + a(j, i));
      if (mag == 0.0) continue;
      const double theta = two_pi_q * (a(i, j) - a(j, i));
      const Complex v = i == j ? Complex(mag, 0.0) : std::polar(mag, theta);
      h(i, j) = v;
      h(j, i) = std::conj(v);
      degree[i] += mag;
      if (j != i) degree[j] += mag;
    }
  }
  return {laplacian_from(h, degree, normalized), SpectralKind::magnetic_laplacian, normalized,
          q};
}

SpectralMatrix signed_magnetic_laplacian(const SignedDirectedGraph& g, double q,
                                         bool normalized) {
  check_q(q);
  const std::size_t n = g.num_nodes();
  RealMatrix a = dense_adjacency(g);
  ComplexMatrix h(n, n);
  std::vector<double> degree(n, 0.0);
  const double two_pi_q = 2.0 * std::numbers::pi * q;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double mag = 0.5 * (std::abs(a(i, j)) + std::abs(a(j, i)));
      if (mag == 0.0) continue;
      const double sign = (a(i, j) + a(j, i)) < 0.0 ? -1.0 : 1.0;
      const double theta = two_pi_q * (std::abs(a(i, j)) - std::abs(a(j, i)));
      const Complex v = i == j ? Complex(sign * mag, 0.0) : sign * std::polar(mag, theta);
      h(i, j) = v;
      h(j, i) = std::conj(v);
      degree[i] += mag;
      if (j != i) degree[j] += mag;
    }
  }
  return {laplacian_from(h, degree, normalized), SpectralKind::signed_magnetic_laplacian,
          normalized, q};
}

SpectralMatrix hermitian_imbalance(const SignedDirectedGraph& g) {
  const std::size_t n = g.num_nodes();
  RealMatrix a = dense_adjacency(g);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = a(i, j) - a(j, i);
      if (d == 0.0) continue;
      h(i, j) = Complex(0.0, d);
      h(j, i) = Complex(0.0, -d);
    }
  }
  return {std::move(h), SpectralKind::hermitian_imbalance, false, 0.0};
}

void write_matrix_csv(std::ostream& out, const SpectralMatrix& m) {
  out << "row,col,re,im\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const Complex v = m.entries(i, j);
      if (v == Complex{}) continue;
      out << i << ',' << j << ',' << format_double(v.real()) << ',' << format_double(v.imag())
          << '\n';
    }
  }
}

}  // namespace sdg
