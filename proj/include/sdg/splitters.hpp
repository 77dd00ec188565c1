#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sdg/graph.hpp"
#include "sdg/rng.hpp"

namespace sdg {

struct NodeSplitParams {
  double train_frac = 0.8;
  double val_frac = 0.1;
  double test_frac = 0.1;
  double seed_frac = 0.1;  // of each class's training nodes
  std::size_t num_splits = 1;
};

/// Masks per replicate; masks[r][i] is node i in replicate r.
struct NodeSplit {
  std::size_t num_nodes = 0;
  std::size_t num_splits = 0;
  std::vector<std::vector<bool>> train;
  std::vector<std::vector<bool>> val;
  std::vector<std::vector<bool>> test;
  std::vector<std::vector<bool>> seed;
};

/// Per class member counts (train, val, test) under the rounding rule:
/// val and test get floor(f * size) with a minimum of one when f > 0, train
/// gets floor(f * size) (minimum one) capped by what is left.
struct ClassQuota {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};
ClassQuota class_quota(std::size_t class_size, const NodeSplitParams& params);

/// Stratified masks; replicate r draws from rng.fork(r).
NodeSplit node_split(std::span<const int> labels, const NodeSplitParams& params,
                     const CounterRng& rng);

enum class LinkTask { sign, direction, existence, three_class, four_class, five_class };

std::string_view to_string(LinkTask task);
/// Accepts the long names and SP, DP, EP, 3C, 4C, 5C.
LinkTask parse_link_task(std::string_view name);
std::size_t num_classes(LinkTask task);

/// Query pair with its class. Label alphabets:
///   sign:        0 positive, 1 negative
///   direction:   0 (u,v) in E, 1 (v,u) in E
///   existence:   0 edge, 1 non-edge
///   three_class: direction classes, 2 non-edge
///   four_class:  0 (u,v) in E+, 1 (v,u) in E+, 2 (u,v) in E-, 3 (v,u) in E-
///   five_class:  four_class classes, 4 non-edge
struct LinkSample {
  NodeId u = 0;
  NodeId v = 0;
  int label = 0;

  friend bool operator==(const LinkSample&, const LinkSample&) = default;
};

/// Edge-derived candidates before negatives are added. `discarded` holds
/// unordered pairs (u < v) that satisfy more than one class condition.
struct LinkCandidates {
  std::vector<LinkSample> samples;
  std::vector<LinkSample> discarded;  // label unused (-1)
};

/// Self-loops are never candidates. For the pair-based tasks the query of
/// every other kept pair is reversed, so both direction classes occur.
LinkCandidates link_candidates(const SignedDirectedGraph& g, LinkTask task);

struct LinkSplitParams {
  double prob_val = 0.15;
  double prob_test = 0.05;
  bool maintain_connectedness = true;
};

struct LinkTaskSplit {
  LinkTask task = LinkTask::sign;
  std::vector<LinkSample> train;
  std::vector<LinkSample> val;
  std::vector<LinkSample> test;
  std::vector<LinkSample> discarded;
  SignedDirectedGraph observed_graph;
};

/// Throws ConfigError when fewer than two classes have samples or when the
/// graph has too few non-edges to sample from.
LinkTaskSplit link_class_split(const SignedDirectedGraph& g, LinkTask task,
                               const LinkSplitParams& params, CounterRng& rng);

/// Kruskal on the undirected support, edges ordered by descending |weight|
/// then (src, dst). Returns the chosen ordered edges of g.
std::vector<Edge> spanning_forest(const SignedDirectedGraph& g);

/// node,replicate,role with role in {train,val,test,seed}.
void write_node_split_csv(std::ostream& out, const NodeSplit& split);
/// u,v,label,fold with fold in {train,val,test}.
void write_link_split_csv(std::ostream& out, const LinkTaskSplit& split);
/// u,v for the discarded ambiguous pairs.
void write_discarded_csv(std::ostream& out, const LinkTaskSplit& split);

}  // namespace sdg
