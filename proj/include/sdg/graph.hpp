#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdg/common.hpp"

namespace sdg {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Compressed sparse rows over the out-edges, in (src, dst) order.
struct CsrView {
  std::vector<std::size_t> offsets;  // num_nodes + 1
  std::vector<NodeId> targets;
  std::vector<double> weights;

  std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }
};

/// Weighted signed/directed graph in COO form. Undirected graphs carry both
/// ordered pairs. Edges are kept sorted by (src, dst); self-loops are allowed,
/// duplicates and zero or non-finite weights are not.
class SignedDirectedGraph {
 public:
  SignedDirectedGraph() = default;
  /// Throws ConfigError on out-of-range ids, duplicates, or bad weights.
  SignedDirectedGraph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Weight of (src, dst), or 0 when absent. O(log m).
  double weight(NodeId src, NodeId dst) const noexcept;
  bool has_edge(NodeId src, NodeId dst) const noexcept { return weight(src, dst) != 0.0; }

  CsrView csr() const;

  const std::optional<RealMatrix>& features() const noexcept { return features_; }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  void set_features(RealMatrix features);
  void set_labels(std::vector<int> labels);

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::optional<RealMatrix> features_;
  std::optional<std::vector<int>> labels_;
};

struct SignedPair {
  SignedDirectedGraph positive_part;
  SignedDirectedGraph negative_part;  // |w| of the negative edges
};

enum class FeatureKind { given, signed_spectral, hermitian_spectral, signed_degree };

struct FeatureMatrix {
  RealMatrix values;
  FeatureKind construction = FeatureKind::given;
  /// Non-empty when the construction was degenerate (e.g. a zero operator).
  std::string warning;
};

struct ComponentResult {
  SignedDirectedGraph graph;
  std::vector<NodeId> original_ids;  // new id -> original id, ascending
};

bool is_signed(const SignedDirectedGraph& g);
bool is_directed(const SignedDirectedGraph& g);

SignedPair separate_positive_negative(const SignedDirectedGraph& g);

/// Weak components ignore direction. Equal sizes tie-break to the component
/// holding the smallest node id. Labels and features follow the kept nodes.
ComponentResult largest_weakly_connected_component(const SignedDirectedGraph& g);

/// Weak component id per node; ids are numbered by smallest member.
std::vector<std::size_t> weak_components(const SignedDirectedGraph& g);

/// Symmetrized signed adjacency (A + A^T) / 2 as a dense matrix.
RealMatrix symmetrized_adjacency(const SignedDirectedGraph& g);

inline constexpr double kDefaultRegularization = 0.25;

/// Top-k eigenvectors of (A + A^T)/2 + tau * (mean |degree| / n) * J,
/// ordered by descending eigenvalue, largest-magnitude entry made positive.
FeatureMatrix signed_spectral_features(const SignedDirectedGraph& g, std::size_t k,
                                       double tau = kDefaultRegularization);

/// [Re U | Im U] for the k eigenvectors of i(A - A^T) with largest |lambda|.
/// Each vector is rotated so its first non-negligible entry is real positive.
FeatureMatrix hermitian_spectral_features(const SignedDirectedGraph& g, std::size_t k);

/// Raw (out+, in+, out-, in-) degrees over |w|, one row per node.
RealMatrix signed_degree_counts(const SignedDirectedGraph& g);

/// signed_degree_counts with each column standardized (constant -> 0).
FeatureMatrix signed_degree_features(const SignedDirectedGraph& g);

/// Horizontal concatenation; row counts must agree.
FeatureMatrix concat_features(const FeatureMatrix& left, const FeatureMatrix& right);

}  // namespace sdg
