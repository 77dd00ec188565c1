#include "sdg/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

namespace sdg {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ConfigError(std::string(what) + ": length mismatch");
}

std::vector<std::size_t> dense_codes(std::span<const int> labels, std::size_t& count) {
  std::vector<int> values(labels.begin(), labels.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  count = values.size();
  std::vector<std::size_t> codes(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    codes[i] = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), labels[i]) - values.begin());
  }
  return codes;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

struct SymEntry {
  NodeId u;
  NodeId v;  // u <= v
  double value;
};

// Entries of (A + A^T) / 2 on the upper triangle, diagonal included.
std::vector<SymEntry> symmetrized_entries(const SignedDirectedGraph& g) {
  std::vector<SymEntry> out;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) {
      out.push_back({e.src, e.dst, e.weight});
    } else if (e.src < e.dst) {
      const double s = 0.5 * (e.weight + g.weight(e.dst, e.src));
      if (s != 0.0) out.push_back({e.src, e.dst, s});
    } else if (!g.has_edge(e.dst, e.src)) {
      out.push_back({e.dst, e.src, 0.5 * e.weight});
    }
  }
  return out;
}

}  // namespace

void SoftAssignment::validate(std::size_t num_nodes) const {
  if (p.rows() != num_nodes) throw ConfigError("soft assignment: row count differs from node count");
  if (p.cols() == 0) throw ConfigError("soft assignment: no clusters");
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double total = 0.0;
    for (double v : p.row(i)) {
      if (!(v >= 0.0)) throw ConfigError("soft assignment: negative or NaN probability");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("soft assignment: row does not sum to 1");
  }
}

std::vector<int> SoftAssignment::argmax() const {
  std::vector<int> out(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const auto r = p.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

SoftAssignment SoftAssignment::one_hot(std::span<const int> labels, std::size_t k) {
  SoftAssignment s{RealMatrix(labels.size(), k)};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
      throw ConfigError("one_hot: label out of range");
    }
    s.p(i, static_cast<std::size_t>(labels[i])) = 1.0;
  }
  return s;
}

double ari(std::span<const int> a, std::span<const int> b) {
  require_same_length(a.size(), b.size(), "ari");
  if (a.size() < 2) throw ConfigError("ari: need at least two items");
  std::size_t ka = 0;
  std::size_t kb = 0;
  const auto ca = dense_codes(a, ka);
  const auto cb = dense_codes(b, kb);
  std::vector<double> table(ka * kb, 0.0), rows(ka, 0.0), cols(kb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[ca[i] * kb + cb[i]] += 1.0;
    rows[ca[i]] += 1.0;
    cols[cb[i]] += 1.0;
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (double t : table) index += choose2(t);
  for (double r : rows) sum_rows += choose2(r);
  for (double c : cols) sum_cols += choose2(c);
  const double expected = sum_rows * sum_cols / choose2(static_cast<double>(a.size()));
  const double maximum = 0.5 * (sum_rows + sum_cols);
  const double denom = maximum - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  require_same_length(pred.size(), truth.size(), "accuracy");
  if (pred.empty()) throw ConfigError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double macro_f1(std::span<const int> pred, std::span<const int> truth) {
  require_same_length(pred.size(), truth.size(), "macro_f1");
  if (pred.empty()) throw ConfigError("macro_f1: empty input");
  std::map<int, std::array<double, 3>> counts;  // tp, predicted, actual
  for (std::size_t i = 0; i < pred.size(); ++i) {
    counts[pred[i]][1] += 1.0;
    counts[truth[i]][2] += 1.0;
    if (pred[i] == truth[i]) counts[pred[i]][0] += 1.0;
  }
  double total = 0.0;
  for (const auto& [label, c] : counts) {
    if (c[0] > 0.0) total += 2.0 * c[0] / (c[1] + c[2]);
  }
  return total / static_cast<double>(counts.size());
}

double auc(std::span<const double> scores, std::span<const int> truth) {
  require_same_length(scores.size(), truth.size(), "auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return scores[x] < scores[y]; });
  double positives = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      const int y = truth[order[t]];
      if (y != 0 && y != 1) throw ConfigError("auc: truth must be 0 or 1");
      if (y == 1) {
        positives += 1.0;
        rank_sum += midrank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) throw ConfigError("auc: both classes must be present");
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

double unhappy_ratio(const SignedDirectedGraph& g, std::span<const int> labels) {
  require_same_length(labels.size(), g.num_nodes(), "unhappy_ratio");
  if (g.num_edges() == 0) throw ConfigError("unhappy_ratio: graph has no edges");
  double unhappy = 0.0, total = 0.0;
  for (const Edge& e : g.edges()) {
    const double mass = std::abs(e.weight);
    const bool same = labels[e.src] == labels[e.dst];
    total += mass;
    if ((e.weight > 0.0) != same) unhappy += mass;
  }
  return unhappy / total;
}

double happy_ratio(const SignedDirectedGraph& g, std::span<const int> labels) {
  require_same_length(labels.size(), g.num_nodes(), "happy_ratio");
  if (g.num_edges() == 0) throw ConfigError("happy_ratio: graph has no edges");
  double happy = 0.0, total = 0.0;
  for (const Edge& e : g.edges()) {
    const double mass = std::abs(e.weight);
    const bool same = labels[e.src] == labels[e.dst];
    total += mass;
    if ((e.weight > 0.0) == same) happy += mass;
  }
  return happy / total;
}

double pbnc_loss(const SignedDirectedGraph& g, const SoftAssignment& soft) {
  soft.validate(g.num_nodes());
  const RealMatrix& p = soft.p;
  const std::size_t k = soft.clusters();
  const std::size_t n = g.num_nodes();
  std::vector<double> deg_pos(n, 0.0), deg_neg(n, 0.0);
  // numerator: sum_k P_k^T (D_P - A_P) P_k + P_k^T A_N P_k
  std::vector<double> num(k, 0.0), vol(k, 0.0);
  for (const SymEntry& s : symmetrized_entries(g)) {
    const double mag = std::abs(s.value);
    const bool pos = s.value > 0.0;
    if (s.u == s.v) {
      (pos ? deg_pos : deg_neg)[s.u] += mag;
      for (std::size_t c = 0; c < k; ++c) {
        const double pu = p(s.u, c);
        num[c] += pos ? 0.0 : mag * pu * pu;
      }
      continue;
    }
    (pos ? deg_pos : deg_neg)[s.u] += mag;
    (pos ? deg_pos : deg_neg)[s.v] += mag;
    for (std::size_t c = 0; c < k; ++c) {
      const double pu = p(s.u, c);
      const double pv = p(s.v, c);
      // positive pair contributes w (pu - pv)^2, negative pair 2 w pu pv
      num[c] += pos ? mag * (pu - pv) * (pu - pv) : 2.0 * mag * pu * pv;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d = deg_pos[i] + deg_neg[i];
    for (std::size_t c = 0; c < k; ++c) vol[c] += d * p(i, c) * p(i, c);
  }
  double loss = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (vol[c] > 0.0) loss += num[c] / vol[c];
  }
  return loss;
}

double prob_imbalance(const SignedDirectedGraph& g, const SoftAssignment& soft) {
  soft.validate(g.num_nodes());
  const std::size_t k = soft.clusters();
  if (k < 2) throw ConfigError("prob_imbalance: need at least two clusters");
  RealMatrix w(k, k);
  for (const Edge& e : g.edges()) {
    const double mass = std::abs(e.weight);
    for (std::size_t a = 0; a < k; ++a) {
      const double pa = soft.p(e.src, a) * mass;
      if (pa == 0.0) continue;
      for (std::size_t b = 0; b < k; ++b) w(a, b) += pa * soft.p(e.dst, b);
    }
  }
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double flow = w(a, b) + w(b, a);
      if (flow > 0.0) total += std::abs(w(a, b) - w(b, a)) / flow;
    }
  }
  return 2.0 * total / static_cast<double>(k * (k - 1));
}

double balanced_triangle_ratio(const SignedDirectedGraph& g) {
  const std::size_t n = g.num_nodes();
  // Upper neighbours only, so each triangle u < v < w is seen once.
  std::vector<std::vector<std::pair<NodeId, bool>>> upper(n);
  for (const SymEntry& s : symmetrized_entries(g)) {
    if (s.u == s.v) continue;
    upper[s.u].push_back({s.v, s.value < 0.0});
  }
  // Pairs whose weights cancel exactly still share an edge; they count as +.
  for (const Edge& e : g.edges()) {
    if (e.src < e.dst && g.weight(e.dst, e.src) == -e.weight) upper[e.src].push_back({e.dst, false});
  }
  for (auto& list : upper) std::sort(list.begin(), list.end());
  std::size_t triangles = 0, balanced = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto& nu = upper[u];
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const auto [v, neg_uv] = nu[i];
      const auto& nv = upper[v];
      // intersect nu[i+1..] with nv
      auto a = nu.begin() + static_cast<std::ptrdiff_t>(i + 1);
      auto b = nv.begin();
      while (a != nu.end() && b != nv.end()) {
        if (a->first < b->first) {
          ++a;
        } else if (b->first < a->first) {
          ++b;
        } else {
          const int negatives = neg_uv + a->second + b->second;
          ++triangles;
          balanced += negatives % 2 == 0;
          ++a;
          ++b;
        }
      }
    }
  }
  if (triangles == 0) throw ConfigError("balanced_triangle_ratio: graph has no triangles");
  return static_cast<double>(balanced) / static_cast<double>(triangles);
}

void write_metric_reports(std::ostream& out, std::span<const MetricReport> reports,
                          const std::string& params_hash) {
  out << "metric,value,support,params_hash\n";
  for (const MetricReport& r : reports) {
    out << r.name << ',' << format_double(r.value) << ',' << r.support << ',' << params_hash << '\n';
  }
}

}  // namespace sdg
