#include "sdg/splitters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>

namespace sdg {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t floor_count(double frac, std::size_t size) {
  // The epsilon keeps 0.1 * 10 from landing on 0.999...
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(size) + 1e-9));
}

std::uint64_t pair_code(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t unordered_code(NodeId a, NodeId b) {
  return a < b ? pair_code(a, b) : pair_code(b, a);
}

bool is_non_edge_label(LinkTask task, int label) {
  switch (task) {
    case LinkTask::existence: return label == 1;
    case LinkTask::three_class: return label == 2;
    case LinkTask::five_class: return label == 4;
    default: return false;
  }
}

int non_edge_label(LinkTask task) {
  switch (task) {
    case LinkTask::existence: return 1;
    case LinkTask::three_class: return 2;
    case LinkTask::five_class: return 4;
    default: return -1;
  }
}

std::size_t edge_classes(LinkTask task) {
  switch (task) {
    case LinkTask::existence: return 1;
    case LinkTask::three_class: return 2;
    case LinkTask::five_class: return 4;
    default: return 0;
  }
}

// Uniform sample without replacement of `need` non-edges, capped at the number available. Ordered pairs for
// existence, unordered pairs (u < v, both directions absent) otherwise.
std::vector<LinkSample> sample_non_edges(const SignedDirectedGraph& g, LinkTask task,
                                         std::size_t need, CounterRng& rng) {
  const std::size_t n = g.num_nodes();
  const bool ordered = task == LinkTask::existence;
  const int label = non_edge_label(task);
  auto valid = [&](NodeId u, NodeId v) {
    if (u == v) return false;
    if (ordered) return !g.has_edge(u, v);
    return !g.has_edge(u, v) && !g.has_edge(v, u);
  };

  std::unordered_set<std::uint64_t> support;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) continue;
    support.insert(ordered ? pair_code(e.src, e.dst) : unordered_code(e.src, e.dst));
  }
  const double pairs = ordered ? static_cast<double>(n) * static_cast<double>(n - 1)
                               : static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double available = n < 2 ? 0.0 : pairs - static_cast<double>(support.size());
  // Near-complete graphs: take every non-edge there is.
  if (static_cast<double>(need) > available) need = static_cast<std::size_t>(available);

  std::vector<LinkSample> out;
  out.reserve(need);
  if (available <= 4.0e6 || 2.0 * static_cast<double>(need) > available) {
    std::vector<std::uint64_t> pool;
    pool.reserve(static_cast<std::size_t>(available));
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = ordered ? 0 : u + 1; v < n; ++v) {
        if (valid(u, v)) pool.push_back(pair_code(u, v));
      }
    }
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      out.push_back({static_cast<NodeId>(pool[i] >> 32), static_cast<NodeId>(pool[i]), label});
    }
    return out;
  }
  std::unordered_set<std::uint64_t> chosen;
  while (out.size() < need) {
    auto u = static_cast<NodeId>(rng.below(n));
    auto v = static_cast<NodeId>(rng.below(n));
    if (!ordered && v < u) std::swap(u, v);
    if (!valid(u, v) || !chosen.insert(pair_code(u, v)).second) continue;
    out.push_back({u, v, label});
  }
  return out;
}

bool sample_order(const LinkSample& a, const LinkSample& b) {
  if (a.u != b.u) return a.u < b.u;
  if (a.v != b.v) return a.v < b.v;
  return a.label < b.label;
}

}  // namespace

ClassQuota class_quota(std::size_t size, const NodeSplitParams& p) {
  ClassQuota q;
  if (size == 0) return q;
  auto at_least_one = [&](double frac) {
    return frac > 0.0 ? std::max<std::size_t>(1, floor_count(frac, size)) : std::size_t{0};
  };
  q.val = at_least_one(p.val_frac);
  q.test = at_least_one(p.test_frac);
  q.train = at_least_one(p.train_frac);
  if (q.val + q.test + (p.train_frac > 0.0 ? 1 : 0) > size) {
    throw ConfigError("node split: class of size " + std::to_string(size) +
                      " cannot honour the minimum of one node per mask");
  }
  q.train = std::min(q.train, size - q.val - q.test);
  return q;
}

NodeSplit node_split(std::span<const int> labels, const NodeSplitParams& p,
                     const CounterRng& rng) {
  for (double f : {p.train_frac, p.val_frac, p.test_frac, p.seed_frac}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("node split: fractions must lie in [0, 1]");
  }
  if (p.train_frac + p.val_frac + p.test_frac > 1.0 + 1e-12) {
    throw ConfigError("node split: train + val + test fractions exceed 1");
  }
  if (p.seed_frac > p.train_frac) throw ConfigError("node split: seed_frac exceeds train_frac");
  if (p.num_splits == 0) throw ConfigError("node split: num_splits must be positive");

  const std::size_t n = labels.size();
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw ConfigError("node split: labels must be nonnegative");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(static_cast<NodeId>(i));
  std::vector<ClassQuota> quotas;
  for (const auto& m : members) quotas.push_back(class_quota(m.size(), p));

  NodeSplit split;
  split.num_nodes = n;
  split.num_splits = p.num_splits;
  for (std::size_t r = 0; r < p.num_splits; ++r) {
    CounterRng stream = rng.fork(r);
    std::vector<bool> train(n), val(n), test(n), seed(n);
    for (std::size_t c = 0; c < members.size(); ++c) {
      std::vector<NodeId> order = members[c];
      stream.shuffle(std::span<NodeId>(order));
      const ClassQuota& q = quotas[c];
      std::size_t at = 0;
      std::vector<NodeId> picked_train;
      for (std::size_t i = 0; i < q.train; ++i) {
        train[order[at]] = true;
        picked_train.push_back(order[at++]);
      }
      for (std::size_t i = 0; i < q.val; ++i) val[order[at++]] = true;
      for (std::size_t i = 0; i < q.test; ++i) test[order[at++]] = true;
      if (p.seed_frac > 0.0 && !picked_train.empty()) {
        const std::size_t seeds =
            std::max<std::size_t>(1, floor_count(p.seed_frac, picked_train.size()));
        stream.shuffle(std::span<NodeId>(picked_train));
        for (std::size_t i = 0; i < seeds; ++i) seed[picked_train[i]] = true;
      }
    }
    split.train.push_back(std::move(train));
    split.val.push_back(std::move(val));
    split.test.push_back(std::move(test));
    split.seed.push_back(std::move(seed));
  }
  return split;
}

std::string_view to_string(LinkTask task) {
  switch (task) {
    case LinkTask::sign: return "sign";
    case LinkTask::direction: return "direction";
    case LinkTask::existence: return "existence";
    case LinkTask::three_class: return "three_class";
    case LinkTask::four_class: return "four_class";
    case LinkTask::five_class: return "five_class";
  }
  return "sign";
}

LinkTask parse_link_task(std::string_view name) {
  if (name == "sign" || name == "SP") return LinkTask::sign;
  if (name == "direction" || name == "DP") return LinkTask::direction;
  if (name == "existence" || name == "EP") return LinkTask::existence;
  if (name == "three_class" || name == "3C") return LinkTask::three_class;
  if (name == "four_class" || name == "4C") return LinkTask::four_class;
  if (name == "five_class" || name == "5C") return LinkTask::five_class;
  throw ConfigError("unknown link task '" + std::string(name) + "'");
}

std::size_t num_classes(LinkTask task) {
  switch (task) {
    case LinkTask::sign:
    case LinkTask::direction:
    case LinkTask::existence: return 2;
    case LinkTask::three_class: return 3;
    case LinkTask::four_class: return 4;
    case LinkTask::five_class: return 5;
  }
  return 2;
}

LinkCandidates link_candidates(const SignedDirectedGraph& g, LinkTask task) {
  LinkCandidates out;
  if (task == LinkTask::sign) {
    const bool undirected = !is_directed(g);
    for (const Edge& e : g.edges()) {
      if (e.src == e.dst || (undirected && e.src > e.dst)) continue;
      out.samples.push_back({e.src, e.dst, e.weight > 0.0 ? 0 : 1});
    }
    return out;
  }
  if (task == LinkTask::existence) {
    for (const Edge& e : g.edges()) {
      if (e.src != e.dst) out.samples.push_back({e.src, e.dst, 0});
    }
    return out;
  }
  const bool signed_classes = task == LinkTask::four_class || task == LinkTask::five_class;
  std::size_t kept = 0;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) continue;
    const bool reciprocal = g.has_edge(e.dst, e.src);
    if (reciprocal) {
      if (e.src < e.dst) out.discarded.push_back({e.src, e.dst, -1});
      continue;
    }
    const int dir = static_cast<int>(kept++ % 2);
    const int label = dir + (signed_classes && e.weight < 0.0 ? 2 : 0);
    if (dir == 0) {
      out.samples.push_back({e.src, e.dst, label});
    } else {
      out.samples.push_back({e.dst, e.src, label});
    }
  }
  return out;
}

std::vector<Edge> spanning_forest(const SignedDirectedGraph& g) {
  std::vector<Edge> order;
  for (const Edge& e : g.edges())
    if (e.src != e.dst) order.push_back(e);
  std::stable_sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
    const double wa = std::abs(a.weight);
    const double wb = std::abs(b.weight);
    if (wa != wb) return wa > wb;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });
  UnionFind uf(g.num_nodes());
  std::vector<Edge> forest;
  for (const Edge& e : order) {
    if (uf.unite(e.src, e.dst)) forest.push_back(e);
  }
  return forest;
}

LinkTaskSplit link_class_split(const SignedDirectedGraph& g, LinkTask task,
                               const LinkSplitParams& params, CounterRng& rng) {
  if (!(params.prob_val >= 0.0 && params.prob_test >= 0.0 &&
        params.prob_val + params.prob_test < 1.0)) {
    throw ConfigError("link split: need prob_val, prob_test >= 0 and prob_val + prob_test < 1");
  }
  LinkCandidates cand = link_candidates(g, task);
  std::vector<LinkSample> samples = std::move(cand.samples);
  if (const std::size_t groups = edge_classes(task); groups > 0) {
    const auto need = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(samples.size()) /
                                                 static_cast<double>(groups))));
    auto negatives = sample_non_edges(g, task, need, rng);
    samples.insert(samples.end(), negatives.begin(), negatives.end());
  }

  const std::size_t classes = num_classes(task);
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class[static_cast<std::size_t>(samples[i].label)].push_back(i);
  }
  const auto populated = std::count_if(by_class.begin(), by_class.end(),
                                       [](const auto& c) { return !c.empty(); });
  if (populated < 2) {
    throw ConfigError("link split: task '" + std::string(to_string(task)) +
                      "' has fewer than two non-empty classes after discarding");
  }

  std::unordered_set<std::uint64_t> forced;
  if (params.maintain_connectedness) {
    for (const Edge& e : spanning_forest(g)) forced.insert(unordered_code(e.src, e.dst));
  }

  LinkTaskSplit split;
  split.task = task;
  split.discarded = std::move(cand.discarded);
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t c = members.size();
    const std::size_t want_val = floor_count(params.prob_val, c);
    const std::size_t want_test = floor_count(params.prob_test, c);
    std::size_t got_val = 0;
    std::size_t got_test = 0;
    for (std::size_t idx : members) {
      const LinkSample& s = samples[idx];
      const bool pinned = !is_non_edge_label(task, s.label) && forced.count(unordered_code(s.u, s.v));
      if (!pinned && got_val < want_val) {
        split.val.push_back(s);
        ++got_val;
      } else if (!pinned && got_test < want_test) {
        split.test.push_back(s);
        ++got_test;
      } else {
        split.train.push_back(s);
      }
    }
  }
  std::sort(split.train.begin(), split.train.end(), sample_order);
  std::sort(split.val.begin(), split.val.end(), sample_order);
  std::sort(split.test.begin(), split.test.end(), sample_order);

  const bool undirected_sign = task == LinkTask::sign && !is_directed(g);
  std::unordered_set<std::uint64_t> hidden;
  for (const auto* fold : {&split.val, &split.test}) {
    for (const LinkSample& s : *fold) {
      if (is_non_edge_label(task, s.label)) continue;
      if (task == LinkTask::sign || task == LinkTask::existence) {
        hidden.insert(pair_code(s.u, s.v));
        if (undirected_sign) hidden.insert(pair_code(s.v, s.u));
      } else {
        hidden.insert(g.has_edge(s.u, s.v) ? pair_code(s.u, s.v) : pair_code(s.v, s.u));
      }
    }
  }
  std::vector<Edge> kept;
  kept.reserve(g.num_edges());
  for (const Edge& e : g.edges())
    if (!hidden.count(pair_code(e.src, e.dst))) kept.push_back(e);
  split.observed_graph = SignedDirectedGraph(g.num_nodes(), std::move(kept));
  if (g.features()) split.observed_graph.set_features(*g.features());
  if (g.labels()) split.observed_graph.set_labels(*g.labels());
  return split;
}

void write_node_split_csv(std::ostream& out, const NodeSplit& split) {
  out << "node,replicate,role\n";
  for (std::size_t r = 0; r < split.num_splits; ++r) {
    for (std::size_t i = 0; i < split.num_nodes; ++i) {
      if (split.train[r][i]) out << i << ',' << r << ",train\n";
      if (split.val[r][i]) out << i << ',' << r << ",val\n";
      if (split.test[r][i]) out << i << ',' << r << ",test\n";
      if (split.seed[r][i]) out << i << ',' << r << ",seed\n";
    }
  }
}

void write_link_split_csv(std::ostream& out, const LinkTaskSplit& split) {
  out << "u,v,label,fold\n";
  const std::pair<const std::vector<LinkSample>*, const char*> folds[] = {
      {&split.train, "train"}, {&split.val, "val"}, {&split.test, "test"}};
  for (const auto& [fold, name] : folds) {
    for (const LinkSample& s : *fold) out << s.u << ',' << s.v << ',' << s.label << ',' << name << '\n';
  }
}

void write_discarded_csv(std::ostream& out, const LinkTaskSplit& split) {
  out << "u,v\n";
  for (const LinkSample& s : split.discarded) out << s.u << ',' << s.v << '\n';
}

}  // namespace sdg
