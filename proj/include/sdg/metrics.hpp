#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdg/common.hpp"
#include "sdg/graph.hpp"

namespace sdg {

/// Row-stochastic n x K cluster probability matrix.
struct SoftAssignment {
  RealMatrix p;

  std::size_t clusters() const noexcept { return p.cols(); }
  /// Throws ConfigError unless rows are nonnegative and sum to 1 within 1e-9.
  void validate(std::size_t num_nodes) const;
  std::vector<int> argmax() const;
  static SoftAssignment one_hot(std::span<const int> labels, std::size_t k);
};

/// Adjusted Rand index (Hubert-Arabie). Returns 1 when both partitions are
/// trivial in the same way (zero denominator).
double ari(std::span<const int> a, std::span<const int> b);

double accuracy(std::span<const int> pred, std::span<const int> truth);
/// Mean F1 over every label seen in either array; a class with no true or no
/// predicted members contributes 0.
double macro_f1(std::span<const int> pred, std::span<const int> truth);
/// ROC AUC for truth in {0, 1} (1 is the positive class), midranks for ties.
double auc(std::span<const double> scores, std::span<const int> truth);

/// |w| mass of positive edges across clusters plus negative edges within,
/// over the total |w| mass.
double unhappy_ratio(const SignedDirectedGraph& g, std::span<const int> labels);
double happy_ratio(const SignedDirectedGraph& g, std::span<const int> labels);

/// Probabilistic balanced normalized cut on A_s = (A + A^T) / 2.
double pbnc_loss(const SignedDirectedGraph& g, const SoftAssignment& p);

/// Mean pairwise flow imbalance |W_kl - W_lk| / (W_kl + W_lk), W = P^T |A| P.
double prob_imbalance(const SignedDirectedGraph& g, const SoftAssignment& p);

/// Fraction of triangles of the undirected support with an even number of
/// negative sides; a side's sign is that of A_uv + A_vu (zero counts as +).
double balanced_triangle_ratio(const SignedDirectedGraph& g);

struct MetricReport {
  std::string name;
  double value = 0.0;
  std::size_t support = 0;
};

/// metric,value,support,params_hash
void write_metric_reports(std::ostream& out, std::span<const MetricReport> reports,
                          const std::string& params_hash);

}  // namespace sdg
