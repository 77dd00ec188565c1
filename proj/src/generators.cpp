#include "sdg/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdg/rng.hpp"

namespace sdg {
namespace {

void require_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

void require_flip(double eta, std::string_view name) {
  if (!(eta >= 0.0 && eta <= 0.5)) {
    throw ConfigError(std::string(name) + " must lie in [0, 0.5]");
  }
}

// Samples each row with its own counter stream (seed, row), so rows can run
// in parallel and the result never depends on scheduling.
template <typename RowSampler>
std::vector<Edge> sample_rows(std::size_t n, std::uint64_t seed, std::uint64_t salt,
                              RowSampler&& sampler) {
  std::vector<std::vector<Edge>> rows(n);
  const CounterRng base(seed, salt);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    CounterRng rng = base.fork(static_cast<std::uint64_t>(i));
    sampler(static_cast<NodeId>(i), rng, rows[static_cast<std::size_t>(i)]);
  }
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  std::vector<Edge> edges;
  edges.reserve(total);
  for (auto& r : rows) edges.insert(edges.end(), r.begin(), r.end());
  return edges;
}

// Upper-triangle samples mirrored into both ordered pairs.
std::vector<Edge> mirror(std::vector<Edge> upper) {
  std::vector<Edge> both;
  both.reserve(2 * upper.size());
  for (const Edge& e : upper) {
    both.push_back(e);
    both.push_back({e.dst, e.src, e.weight});
  }
  return both;
}

// Fills zeros that are outside the imbalance pattern (neither (k,l) nor
// (l,k) is a meta-graph arc) with 0.5.
RealMatrix fill_ambient(const RealMatrix& f, const std::vector<std::vector<bool>>& pattern) {
  RealMatrix filled = f;
  const std::size_t k = f.rows();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b || f(a, b) != 0.0) continue;
      if (!pattern[a][b] && !pattern[b][a]) filled(a, b) = 0.5;
    }
  }
  return filled;
}

}  // namespace

std::size_t BlockSizes::total() const noexcept {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

std::vector<int> BlockSizes::assignment() const {
  std::vector<int> labels;
  labels.reserve(total());
  for (std::size_t b = 0; b < sizes.size(); ++b) labels.insert(labels.end(), sizes[b], static_cast<int>(b));
  return labels;
}

BlockSizes block_sizes(std::size_t n, std::size_t k, double rho) {
  if (k < 1) throw ConfigError("block_sizes: K must be at least 1");
  if (n < k) throw ConfigError("block_sizes: n must be at least K");
  if (!(rho >= 1.0)) throw ConfigError("block_sizes: rho must be >= 1");
  BlockSizes out;
  out.sizes.assign(k, 0);
  if (k == 1) {
    out.sizes[0] = n;
    return out;
  }
  const auto nd = static_cast<double>(n);
  if (rho == 1.0) {
    const std::size_t base = n / k;
    for (std::size_t i = 0; i + 1 < k; ++i) out.sizes[i] = base;
    out.sizes[k - 1] = n - (k - 1) * base;
  } else {
    const double rho0 = std::pow(rho, 1.0 / static_cast<double>(k - 1));
    const double first =
        std::floor(nd * (1.0 - rho0) / (1.0 - std::pow(rho0, static_cast<double>(k))));
    std::vector<double> s(k, 0.0);
    s[0] = first;
    for (std::size_t i = 1; i + 1 < k; ++i) s[i] = std::floor(rho0 * s[i - 1]);
    double used = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) used += s[i];
    s[k - 1] = nd - used;
    for (std::size_t i = 0; i < k; ++i) {
      if (s[i] <= 0.0) throw ConfigError("block_sizes: parameters give an empty block");
      out.sizes[i] = static_cast<std::size_t>(s[i]);
    }
  }
  for (std::size_t s : out.sizes)
    if (s == 0) throw ConfigError("block_sizes: parameters give an empty block");
  return out;
}

std::string_view to_string(MetaKind kind) {
  switch (kind) {
    case MetaKind::cycle: return "cycle";
    case MetaKind::path: return "path";
    case MetaKind::complete: return "complete";
    case MetaKind::star: return "star";
    case MetaKind::custom: return "custom";
  }
  return "custom";
}

MetaKind parse_meta_kind(std::string_view name) {
  if (name == "cycle" || name == "cyclic") return MetaKind::cycle;
  if (name == "path") return MetaKind::path;
  if (name == "complete") return MetaKind::complete;
  if (name == "star") return MetaKind::star;
  throw ConfigError("unknown meta-graph kind '" + std::string(name) + "'");
}

MetaGraph meta_graph(MetaKind kind, std::size_t k, double eta, bool ambient, std::uint64_t seed) {
  if (k < 2) throw ConfigError("meta_graph: K must be at least 2");
  require_flip(eta, "eta");
  if (kind == MetaKind::custom) throw ConfigError("meta_graph: use custom_meta for custom F");
  if (kind == MetaKind::cycle && ambient && k < 3) {
    throw ConfigError("meta_graph: cycle with ambient cluster needs K >= 3");
  }
  RealMatrix f(k, k);
  std::vector<std::vector<bool>> pattern(k, std::vector<bool>(k, false));
  auto arc = [&](std::size_t a, std::size_t b, double value) {
    f(a, b) += value;
    pattern[a][b] = true;
  };
  for (std::size_t i = 0; i < k; ++i) f(i, i) = 0.5;

  switch (kind) {
    case MetaKind::cycle: {
      const std::size_t m = ambient ? k - 1 : k;
      if (m == 2) {  // both neighbours coincide; a single arc
        arc(0, 1, 1.0 - eta);
        arc(1, 0, eta);
        break;
      }
      for (std::size_t a = 0; a < m; ++a) {
        arc(a, (a + 1) % m, 1.0 - eta);
        arc(a, (a + m - 1) % m, eta);
      }
      break;
    }
    case MetaKind::path:
      for (std::size_t a = 0; a + 1 < k; ++a) {
        arc(a, a + 1, 1.0 - eta);
        arc(a + 1, a, eta);
      }
      break;
    case MetaKind::complete: {
      CounterRng rng(seed, 0xC0);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
          const double v = rng.bernoulli(0.5) ? eta : 1.0 - eta;
          arc(a, b, v);
          arc(b, a, 1.0 - v);
        }
      }
      break;
    }
    case MetaKind::star: {
      const std::size_t center = (k - 1) / 2;
      for (std::size_t l = 0; l < k; ++l) {
        if (l == center) continue;
        const double out = (l % 2 == 1) ? 1.0 - eta : eta;
        arc(center, l, out);
        arc(l, center, 1.0 - out);
      }
      break;
    }
    case MetaKind::custom: break;
  }

  MetaGraph meta;
  meta.kind = kind;
  meta.ambient = ambient;
  if (ambient) {
    for (std::size_t i = 0; i < k; ++i) {
      f(k - 1, i) = 0.0;
      f(i, k - 1) = 0.0;
      pattern[k - 1][i] = pattern[i][k - 1] = false;
    }
  }
  meta.filled = fill_ambient(f, pattern);
  if (ambient) {
    for (std::size_t i = 0; i < k; ++i) meta.filled(k - 1, i) = meta.filled(i, k - 1) = 0.5;
  }
  meta.f = std::move(f);
  return meta;
}

MetaGraph custom_meta(RealMatrix f) {
  if (f.rows() != f.cols() || f.rows() == 0) throw ConfigError("custom_meta: F must be square");
  for (double v : f.values())
    if (!(std::abs(v) <= 1.0)) throw ConfigError("custom_meta: entries must satisfy |F| <= 1");
  MetaGraph meta;
  meta.kind = MetaKind::custom;
  meta.filled = f;
  meta.f = std::move(f);
  return meta;
}

MetaGraph f1_meta(double gamma) {
  require_probability(gamma, "gamma");
  RealMatrix f(3, 3);
  const double rows[3][3] = {{0.5, gamma, -gamma},
                             {1.0 - gamma, 0.5, -0.5},
                             {-1.0 + gamma, -0.5, 0.5}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) f(i, j) = rows[i][j];
  return custom_meta(std::move(f));
}

MetaGraph f2_meta(double gamma) {
  require_probability(gamma, "gamma");
  RealMatrix f(4, 4);
  const double rows[4][4] = {{0.5, gamma, -gamma, -gamma},
                             {1.0 - gamma, 0.5, -0.5, -gamma},
                             {-1.0 + gamma, -0.5, 0.5, -gamma},
                             {-1.0 + gamma, -1.0 + gamma, -1.0 + gamma, 0.5}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) f(i, j) = rows[i][j];
  return custom_meta(std::move(f));
}

SsbmParams SsbmParams::uniform(std::size_t n, std::size_t k, double p, double eta, double rho,
                               std::uint64_t seed) {
  return {n, k, p, p, rho, eta, eta, seed};
}

GeneratedInstance ssbm(const SsbmParams& prm) {
  require_probability(prm.p_in, "p_in");
  require_probability(prm.p_out, "p_out");
  require_flip(prm.eta_in, "eta_in");
  require_flip(prm.eta_out, "eta_out");
  const BlockSizes blocks = block_sizes(prm.n, prm.k, prm.rho);
  const std::vector<int> labels = blocks.assignment();

  auto upper = sample_rows(prm.n, prm.seed, 0x55, [&](NodeId i, CounterRng& rng, std::vector<Edge>& out) {
    for (std::size_t j = i + 1; j < prm.n; ++j) {
      const bool within = labels[i] == labels[j];
      if (!rng.bernoulli(within ? prm.p_in : prm.p_out)) continue;
      double w = within ? 1.0 : -1.0;
      if (rng.bernoulli(within ? prm.eta_in : prm.eta_out)) w = -w;
      out.push_back({i, static_cast<NodeId>(j), w});
    }
  });

  GeneratedInstance inst;
  inst.graph = SignedDirectedGraph(prm.n, mirror(std::move(upper)));
  inst.labels = labels;
  inst.num_clusters = prm.k;
  inst.params.set("model", "ssbm");
  inst.params.set("n", static_cast<std::uint64_t>(prm.n));
  inst.params.set("K", static_cast<std::uint64_t>(prm.k));
  inst.params.set("p_in", prm.p_in);
  inst.params.set("p_out", prm.p_out);
  inst.params.set("rho", prm.rho);
  inst.params.set("eta_in", prm.eta_in);
  inst.params.set("eta_out", prm.eta_out);
  inst.params.set("seed", prm.seed);
  return inst;
}

SignedDirectedGraph signed_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require_probability(p, "p");
  auto upper = sample_rows(n, seed, 0xE5, [&](NodeId i, CounterRng& rng, std::vector<Edge>& out) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!rng.bernoulli(p)) continue;
      out.push_back({i, static_cast<NodeId>(j), rng.bernoulli(0.5) ? 1.0 : -1.0});
    }
  });
  return SignedDirectedGraph(n, mirror(std::move(upper)));
}

GeneratedInstance pol_ssbm(const PolSsbmParams& prm) {
  require_probability(prm.p, "p");
  require_flip(prm.eta, "eta");
  if (prm.communities < 1) throw ConfigError("pol_ssbm: r must be at least 1");
  const std::size_t planted = prm.communities * prm.community_budget;
  if (planted > prm.n) throw ConfigError("pol_ssbm: r * N exceeds n");
  const BlockSizes community = block_sizes(planted, prm.communities, prm.rho);

  std::vector<int> labels(prm.n, static_cast<int>(2 * prm.communities));
  std::vector<int> community_of(prm.n, -1);
  std::vector<Edge> edges;
  std::size_t offset = 0;
  for (std::size_t c = 0; c < prm.communities; ++c) {
    const std::size_t size = community.sizes[c];
    if (size < 2) throw ConfigError("pol_ssbm: community too small for two blocks");
    SsbmParams sub = SsbmParams::uniform(size, 2, prm.p, prm.eta, prm.rho,
                                         CounterRng::derive_key(prm.seed, c + 1));
    const GeneratedInstance planted_block = ssbm(sub);
    for (std::size_t i = 0; i < size; ++i) {
      labels[offset + i] = static_cast<int>(2 * c) + planted_block.labels[i];
      community_of[offset + i] = static_cast<int>(c);
    }
    for (const Edge& e : planted_block.graph.edges()) {
      edges.push_back({static_cast<NodeId>(offset + e.src), static_cast<NodeId>(offset + e.dst),
                       e.weight});
    }
    offset += size;
  }
  const SignedDirectedGraph background = signed_erdos_renyi(prm.n, prm.p, prm.seed);
  for (const Edge& e : background.edges()) {
    const int cs = community_of[e.src];
    if (cs >= 0 && cs == community_of[e.dst]) continue;  // overwritten by the planted SSBM
    edges.push_back(e);
  }

  GeneratedInstance inst;
  inst.graph = SignedDirectedGraph(prm.n, std::move(edges));
  inst.labels = std::move(labels);
  inst.num_clusters = 2 * prm.communities + 1;
  inst.params.set("model", "pol_ssbm");
  inst.params.set("n", static_cast<std::uint64_t>(prm.n));
  inst.params.set("r", static_cast<std::uint64_t>(prm.communities));
  inst.params.set("p", prm.p);
  inst.params.set("rho", prm.rho);
  inst.params.set("eta", prm.eta);
  inst.params.set("N", static_cast<std::uint64_t>(prm.community_budget));
  inst.params.set("seed", prm.seed);
  return inst;
}

GeneratedInstance dsbm(const MetaGraph& meta, const DsbmParams& prm) {
  require_probability(prm.p, "p");
  const std::size_t k = meta.clusters();
  double peak = 0.0;
  for (double v : meta.filled.values()) {
    if (v < 0.0 || v > 1.0) throw ConfigError("dsbm: meta-graph entries must lie in [0, 1]");
    peak = std::max(peak, v);
  }
  if (prm.p * peak > 1.0) throw ConfigError("dsbm: p * max(F) exceeds 1");
  const BlockSizes blocks = block_sizes(prm.n, k, prm.rho);
  const std::vector<int> labels = blocks.assignment();

  auto edges = sample_rows(prm.n, prm.seed, 0xD5, [&](NodeId i, CounterRng& rng, std::vector<Edge>& out) {
    const auto ci = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < prm.n; ++j) {
      if (j == i) continue;
      if (rng.bernoulli(prm.p * meta.filled(ci, static_cast<std::size_t>(labels[j])))) {
        out.push_back({i, static_cast<NodeId>(j), 1.0});
      }
    }
  });

  GeneratedInstance inst;
  inst.graph = SignedDirectedGraph(prm.n, std::move(edges));
  inst.labels = labels;
  inst.num_clusters = k;
  inst.params.set("model", "dsbm");
  inst.params.set("meta", std::string(to_string(meta.kind)));
  inst.params.set("K", static_cast<std::uint64_t>(k));
  inst.params.set("ambient", meta.ambient);
  inst.params.set("n", static_cast<std::uint64_t>(prm.n));
  inst.params.set("p", prm.p);
  inst.params.set("rho", prm.rho);
  inst.params.set("seed", prm.seed);
  return inst;
}

GeneratedInstance sdsbm(const MetaGraph& meta, const SdsbmParams& prm) {
  require_probability(prm.p, "p");
  require_flip(prm.eta, "eta");
  const std::size_t k = meta.clusters();
  for (double v : meta.f.values())
    if (!(std::abs(v) <= 1.0)) throw ConfigError("sdsbm: entries must satisfy |F| <= 1");
  const BlockSizes blocks = block_sizes(prm.n, k, prm.rho);
  const std::vector<int> labels = blocks.assignment();

  auto edges = sample_rows(prm.n, prm.seed, 0x5D, [&](NodeId i, CounterRng& rng, std::vector<Edge>& out) {
    const auto ci = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < prm.n; ++j) {
      if (j == i) continue;
      const double f = meta.f(ci, static_cast<std::size_t>(labels[j]));
      if (f == 0.0 || !rng.bernoulli(prm.p * std::abs(f))) continue;
      double w = f >= 0.0 ? 1.0 : -1.0;
      if (rng.bernoulli(prm.eta)) w = -w;
      out.push_back({i, static_cast<NodeId>(j), w});
    }
  });

  GeneratedInstance inst;
  inst.graph = SignedDirectedGraph(prm.n, std::move(edges));
  inst.labels = labels;
  inst.num_clusters = k;
  inst.params.set("model", "sdsbm");
  inst.params.set("n", static_cast<std::uint64_t>(prm.n));
  inst.params.set("p", prm.p);
  inst.params.set("rho", prm.rho);
  inst.params.set("eta", prm.eta);
  inst.params.set("seed", prm.seed);
  return inst;
}

GeneratedInstance generate(const ParamRecord& prm) {
  const std::string model = prm.get_string("model", "");
  const auto seed = prm.get_seed("seed", 0);
  const auto n = static_cast<std::size_t>(prm.get_int("n", 1000));
  if (model == "ssbm") {
    SsbmParams s;
    s.n = n;
    s.k = static_cast<std::size_t>(prm.get_int("K", 2));
    const double p = prm.get_double("p", 0.1);
    s.p_in = prm.get_double("p_in", p);
    s.p_out = prm.get_double("p_out", p);
    const double eta = prm.get_double("eta", 0.0);
    s.eta_in = prm.get_double("eta_in", eta);
    s.eta_out = prm.get_double("eta_out", eta);
    s.rho = prm.get_double("rho", 1.0);
    s.seed = seed;
    return ssbm(s);
  }
  if (model == "pol_ssbm") {
    PolSsbmParams s;
    s.n = n;
    s.communities = static_cast<std::size_t>(prm.get_int("r", 5));
    s.p = prm.get_double("p", 0.1);
    s.rho = prm.get_double("rho", 1.5);
    s.eta = prm.get_double("eta", 0.0);
    s.community_budget = static_cast<std::size_t>(
        prm.get_int("N", static_cast<std::int64_t>(n / (2 * s.communities))));
    s.seed = seed;
    return pol_ssbm(s);
  }
  if (model == "dsbm") {
    const MetaKind kind = parse_meta_kind(prm.get_string("meta", "cycle"));
    const auto k = static_cast<std::size_t>(prm.get_int("K", 3));
    const double eta = prm.get_double("eta", 0.0);
    const bool ambient = prm.get_bool("ambient", false);
    const MetaGraph meta = meta_graph(kind, k, eta, ambient, seed);
    DsbmParams d{n, prm.get_double("p", 0.02), prm.get_double("rho", 1.0), seed};
    GeneratedInstance inst = dsbm(meta, d);
    inst.params.set("eta", eta);
    return inst;
  }
  if (model == "sdsbm") {
    const std::string meta_name = prm.get_string("meta", "f1");
    const double gamma = prm.get_double("gamma", 0.0);
    MetaGraph meta;
    if (meta_name == "f1") {
      meta = f1_meta(gamma);
    } else if (meta_name == "f2") {
      meta = f2_meta(gamma);
    } else {
      throw ConfigError("sdsbm: meta must be f1 or f2");
    }
    SdsbmParams s{n, prm.get_double("p", 0.1), prm.get_double("rho", 1.0),
                  prm.get_double("eta", 0.0), seed};
    GeneratedInstance inst = sdsbm(meta, s);
    inst.params.set("meta", meta_name);
    inst.params.set("gamma", gamma);
    return inst;
  }
  if (model == "signed_er") {
    GeneratedInstance inst;
    const double p = prm.get_double("p", 0.1);
    inst.graph = signed_erdos_renyi(n, p, seed);
    inst.labels.assign(n, 0);
    inst.num_clusters = 1;
    inst.params.set("model", "signed_er");
    inst.params.set("n", static_cast<std::uint64_t>(n));
    inst.params.set("p", p);
    inst.params.set("seed", seed);
    return inst;
  }
  throw ConfigError("unknown model '" + model + "'");
}

}  // namespace sdg
