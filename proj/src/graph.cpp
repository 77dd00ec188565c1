#include "sdg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "sdg/spectral.hpp"

namespace sdg {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

SignedDirectedGraph::SignedDirectedGraph(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    if (e.src >= num_nodes_ || e.dst >= num_nodes_) {
      throw ConfigError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                        ") references a node outside [0, " + std::to_string(num_nodes_) + ")");
    }
    if (!std::isfinite(e.weight) || e.weight == 0.0) {
      throw ConfigError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                        ") has a zero or non-finite weight");
    }
  }
  const auto by_pair = [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  };
  if (!std::is_sorted(edges_.begin(), edges_.end(), by_pair)) {
    std::sort(edges_.begin(), edges_.end(), by_pair);
  }
  const auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src == b.src && a.dst == b.dst;
  });
  if (dup != edges_.end()) {
    throw ConfigError("duplicate edge (" + std::to_string(dup->src) + "," +
                      std::to_string(dup->dst) + ")");
  }
}

double SignedDirectedGraph::weight(NodeId src, NodeId dst) const noexcept {
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{src, dst},
                                   [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                                     return e.src != key.first ? e.src < key.first
                                                               : e.dst < key.second;
                                   });
  if (it != edges_.end() && it->src == src && it->dst == dst) return it->weight;
  return 0.0;
}

CsrView SignedDirectedGraph::csr() const {
  CsrView view;
  view.offsets.assign(num_nodes_ + 1, 0);
  view.targets.reserve(edges_.size());
  view.weights.reserve(edges_.size());
  for (const Edge& e : edges_) {
    ++view.offsets[e.src + 1];
    view.targets.push_back(e.dst);
    view.weights.push_back(e.weight);
  }
  std::partial_sum(view.offsets.begin(), view.offsets.end(), view.offsets.begin());
  return view;
}

void SignedDirectedGraph::set_features(RealMatrix features) {
  if (features.rows() != num_nodes_) throw ConfigError("feature rows must equal num_nodes");
  for (double v : features.values())
    if (!std::isfinite(v)) throw ConfigError("features must be finite");
  features_ = std::move(features);
}

void SignedDirectedGraph::set_labels(std::vector<int> labels) {
  if (labels.size() != num_nodes_) throw ConfigError("label count must equal num_nodes");
  labels_ = std::move(labels);
}

bool is_signed(const SignedDirectedGraph& g) {
  return std::any_of(g.edges().begin(), g.edges().end(),
                     [](const Edge& e) { return e.weight < 0.0; });
}

bool is_directed(const SignedDirectedGraph& g) {
  return std::any_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return g.weight(e.dst, e.src) != e.weight;
  });
}

SignedPair separate_positive_negative(const SignedDirectedGraph& g) {
  std::vector<Edge> pos, neg;
  for (const Edge& e : g.edges()) {
    if (e.weight > 0.0) {
      pos.push_back(e);
    } else {
      neg.push_back({e.src, e.dst, -e.weight});
    }
  }
  return {SignedDirectedGraph(g.num_nodes(), std::move(pos)),
          SignedDirectedGraph(g.num_nodes(), std::move(neg))};
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // The smaller id always becomes the root, so roots are component minima.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<std::size_t> weak_components(const SignedDirectedGraph& g) {
  DisjointSets sets(g.num_nodes());
  for (const Edge& e : g.edges()) sets.unite(e.src, e.dst);
  std::vector<std::size_t> root(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) root[i] = sets.find(i);
  // Renumber roots densely in order of first appearance (= smallest member).
  std::vector<std::size_t> id(g.num_nodes(), SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (id[root[i]] == SIZE_MAX) id[root[i]] = next++;
    root[i] = id[root[i]];
  }
  return root;
}

ComponentResult largest_weakly_connected_component(const SignedDirectedGraph& g) {
  ComponentResult out;
  const std::size_t n = g.num_nodes();
  if (n == 0) return out;
  const std::vector<std::size_t> comp = weak_components(g);
  const std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (std::size_t c : comp) ++sizes[c];
  // Components are numbered by smallest member, so the first maximum wins ties.
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  std::vector<NodeId> remap(n, static_cast<NodeId>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == best) {
      remap[i] = static_cast<NodeId>(out.original_ids.size());
      out.original_ids.push_back(static_cast<NodeId>(i));
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (comp[e.src] == best) edges.push_back({remap[e.src], remap[e.dst], e.weight});
  }
  out.graph = SignedDirectedGraph(out.original_ids.size(), std::move(edges));
  if (g.labels()) {
    std::vector<int> labels;
    for (NodeId id : out.original_ids) labels.push_back((*g.labels())[id]);
    out.graph.set_labels(std::move(labels));
  }
  if (g.features()) {
    const RealMatrix& f = *g.features();
    RealMatrix kept(out.original_ids.size(), f.cols());
    for (std::size_t r = 0; r < out.original_ids.size(); ++r)
      for (std::size_t c = 0; c < f.cols(); ++c) kept(r, c) = f(out.original_ids[r], c);
    out.graph.set_features(std::move(kept));
  }
  return out;
}

RealMatrix symmetrized_adjacency(const SignedDirectedGraph& g) {
  RealMatrix a(g.num_nodes(), g.num_nodes());
  for (const Edge& e : g.edges()) {
    a(e.src, e.dst) += 0.5 * e.weight;
    a(e.dst, e.src) += 0.5 * e.weight;
  }
  return a;
}

FeatureMatrix signed_spectral_features(const SignedDirectedGraph& g, std::size_t k, double tau) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw ConfigError("signed_spectral_features: graph has no nodes");
  if (k > n) throw ConfigError("signed_spectral_features: k exceeds the number of nodes");
  RealMatrix a = symmetrized_adjacency(g);
  double abs_mass = 0.0;
  for (double v : a.values()) abs_mass += std::abs(v);
  const double mean_degree = abs_mass / static_cast<double>(n);
  const double shift = tau * mean_degree / static_cast<double>(n);
  if (shift != 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) += shift;
  }

  FeatureMatrix out;
  out.construction = FeatureKind::signed_spectral;
  if (abs_mass == 0.0 && shift == 0.0) {
    out.warning = "signed_spectral_features: operator is identically zero; eigenvectors are arbitrary";
  }
  const EigenPairs pairs = eigh_real(a, k, EigenSelection::largest);
  out.values = RealMatrix(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t src = k - 1 - c;  // descending eigenvalue
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(pairs.vectors(i, src).real());
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    const double sign = pairs.vectors(arg, src).real() < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.values(i, c) = sign * pairs.vectors(i, src).real();
  }
  return out;
}

FeatureMatrix hermitian_spectral_features(const SignedDirectedGraph& g, std::size_t k) {
  const std::size_t n = g.num_nodes();
  if (k > n) throw ConfigError("hermitian_spectral_features: k exceeds the number of nodes");
  const SpectralMatrix h = hermitian_imbalance(g);
  FeatureMatrix out;
  out.construction = FeatureKind::hermitian_spectral;
  out.values = RealMatrix(n, 2 * k);
  bool zero = true;
  for (const Complex& v : h.entries.values()) {
    if (v != Complex{}) {
      zero = false;
      break;
    }
  }
  if (zero) {
    out.warning = "hermitian_spectral_features: graph is symmetric, imbalance matrix is zero";
    return out;
  }
  const EigenPairs pairs = eigh(h.entries, k, EigenSelection::largest_magnitude);
  // Column order: descending |lambda|, then descending lambda.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(pairs.values[a]);
    const double mb = std::abs(pairs.values[b]);
    if (ma != mb) return ma > mb;
    return pairs.values[a] > pairs.values[b];
  });
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t src = order[c];
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(pairs.vectors(i, src)));
    Complex rotate{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const Complex v = pairs.vectors(i, src);
      if (std::abs(v) > 1e-10 * peak) {
        rotate = std::conj(v) / std::abs(v);
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Complex v = pairs.vectors(i, src) * rotate;
      out.values(i, c) = v.real();
      out.values(i, k + c) = v.imag();
    }
  }
  return out;
}

RealMatrix signed_degree_counts(const SignedDirectedGraph& g) {
  RealMatrix d(g.num_nodes(), 4);
  for (const Edge& e : g.edges()) {
    const double w = std::abs(e.weight);
    if (e.weight > 0.0) {
      d(e.src, 0) += w;
      d(e.dst, 1) += w;
    } else {
      d(e.src, 2) += w;
      d(e.dst, 3) += w;
    }
  }
  return d;
}

FeatureMatrix signed_degree_features(const SignedDirectedGraph& g) {
  FeatureMatrix out;
  out.construction = FeatureKind::signed_degree;
  out.values = signed_degree_counts(g);
  const std::size_t n = g.num_nodes();
  if (n == 0) return out;
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += out.values(i, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (out.values(i, c) - mean) * (out.values(i, c) - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    const bool constant = sd <= 1e-12 * (std::abs(mean) + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      out.values(i, c) = !constant ? (out.values(i, c) - mean) / sd : 0.0;
    }
  }
  return out;
}

FeatureMatrix concat_features(const FeatureMatrix& left, const FeatureMatrix& right) {
  if (left.values.rows() != right.values.rows()) {
    throw ConfigError("concat_features: row counts differ");
  }
  const std::size_t n = left.values.rows();
  const std::size_t dl = left.values.cols();
  const std::size_t dr = right.values.cols();
  FeatureMatrix out;
  out.construction = left.construction;
  out.values = RealMatrix(n, dl + dr);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dl; ++c) out.values(i, c) = left.values(i, c);
    for (std::size_t c = 0; c < dr; ++c) out.values(i, dl + c) = right.values(i, c);
  }
  out.warning = left.warning.empty() ? right.warning : left.warning;
  return out;
}

}  // namespace sdg
