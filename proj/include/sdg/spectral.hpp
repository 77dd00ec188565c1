#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "sdg/common.hpp"
#include "sdg/graph.hpp"

namespace sdg {

enum class SpectralKind {
  normalized_laplacian,
  signed_laplacian,
  signed_laplacian_sym,
  magnetic_laplacian,
  signed_magnetic_laplacian,
  hermitian_imbalance,
};

std::string_view to_string(SpectralKind kind);

/// Hermitian operator built from a graph. Real kinds have a zero imaginary part.
struct SpectralMatrix {
  ComplexMatrix entries;
  SpectralKind kind = SpectralKind::normalized_laplacian;
  bool normalized = false;
  double q = 0.0;  // magnetic kinds only

  std::size_t size() const noexcept { return entries.rows(); }
  bool is_real() const noexcept;
};

struct EigenPairs {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // n x k, column j pairs with values[j]
};

enum class EigenSelection { smallest, largest, largest_magnitude };

/// max |M - M^H| / max(|M|) (0 for the zero matrix).
double hermitian_defect(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

/// I - D^{-1/2} A_s D^{-1/2} with A_s = (|A| + |A|^T) / 2; isolated rows of D^{-1/2} are 0.
SpectralMatrix normalized_laplacian(const SignedDirectedGraph& g);

/// D_bar - A_s (or its symmetric normalization), A_s = (A + A^T)/2 with signs,
/// D_bar the absolute row sums.
SpectralMatrix signed_laplacian(const SignedDirectedGraph& g, bool normalized);

/// Magnetic Laplacian with phase 2*pi*q*(A - A^T); rejects negative weights
/// and q outside [0, 0.5].
SpectralMatrix magnetic_laplacian(const SignedDirectedGraph& g, double q, bool normalized);

/// Magnitude (|A_uv| + |A_vu|)/2, sign of A_uv + A_vu (zero counts as +),
/// phase 2*pi*q*(|A_uv| - |A_vu|).
SpectralMatrix signed_magnetic_laplacian(const SignedDirectedGraph& g, double q,
                                         bool normalized);

/// i (A - A^T).
SpectralMatrix hermitian_imbalance(const SignedDirectedGraph& g);

/// Dense Hermitian eigensolver: Householder reduction to real tridiagonal form,
/// implicit QL, eigenvectors recovered only for the selected pairs.
/// Throws ConfigError for non-Hermitian input or k > n, NumericError when QL
/// exceeds 30 * n iterations.
EigenPairs eigh(const ComplexMatrix& m, std::size_t k,
                EigenSelection which = EigenSelection::smallest);
EigenPairs eigh(const SpectralMatrix& m, std::size_t k,
                EigenSelection which = EigenSelection::smallest);

/// Real symmetric fast path of the same algorithm.
EigenPairs eigh_real(const RealMatrix& m, std::size_t k,
                     EigenSelection which = EigenSelection::smallest);

/// All eigenvalues, ascending.
std::vector<double> eigenvalues(const ComplexMatrix& m);

/// Nonzero entries as "row,col,re,im" lines with a header.
void write_matrix_csv(std::ostream& out, const SpectralMatrix& m);

}  // namespace sdg
