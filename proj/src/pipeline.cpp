#include "sdg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "sdg/generators.hpp"
#include "sdg/metrics.hpp"

namespace sdg {
namespace {

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 0 for constant columns

  static Standardizer fit(const RealMatrix& x) {
    Standardizer s;
    const std::size_t d = x.cols();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 0.0);
    const auto n = static_cast<double>(x.rows());
    for (std::size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) m += x(i, j);
      m /= n;
      double var = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) var += (x(i, j) - m) * (x(i, j) - m);
      const double sd = std::sqrt(var / n);
      s.mean[j] = m;
      s.scale[j] = sd > 1e-12 * (std::abs(m) + 1.0) ? 1.0 / sd : 0.0;
    }
    return s;
  }

  void apply(RealMatrix& x) const {
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = (x(i, j) - mean[j]) * scale[j];
  }
};

RealMatrix edge_features(const RealMatrix& nodes, std::span<const LinkSample> samples,
                         EdgeFeatureMap map) {
  const std::size_t d = nodes.cols();
  RealMatrix out(samples.size(), map == EdgeFeatureMap::concat ? 2 * d : d);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto xu = nodes.row(samples[s].u);
    const auto xv = nodes.row(samples[s].v);
    for (std::size_t j = 0; j < d; ++j) {
      switch (map) {
        case EdgeFeatureMap::concat:
          out(s, j) = xu[j];
          out(s, d + j) = xv[j];
          break;
        case EdgeFeatureMap::hadamard: out(s, j) = xu[j] * xv[j]; break;
        case EdgeFeatureMap::difference: out(s, j) = xu[j] - xv[j]; break;
      }
    }
  }
  return out;
}

std::vector<int> labels_of(std::span<const LinkSample> samples) {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("results CSV: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::uint64_t> to_seeds(const std::vector<std::int64_t>& raw) {
  std::vector<std::uint64_t> out;
  for (auto s : raw) {
    if (s < 0) throw ConfigError("seeds must be nonnegative");
    out.push_back(static_cast<std::uint64_t>(s));
  }
  if (out.empty()) throw ConfigError("seeds must not be empty");
  return out;
}

}  // namespace

void RunResult::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
    if (a.instance != b.instance) return a.instance < b.instance;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.metric < b.metric;
  });
}

std::vector<Aggregate> RunResult::summary() const {
  std::vector<Aggregate> out;
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  for (const RunRow& r : rows) groups[{r.sweep_value, r.metric}].push_back(r.value);
  for (const auto& [key, values] : groups) {
    Aggregate a;
    a.sweep_value = key.first;
    a.metric = key.second;
    a.count = values.size();
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(a.count);
    if (a.count > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - a.mean) * (v - a.mean);
      a.sd = std::sqrt(ss / static_cast<double>(a.count - 1));
    }
    out.push_back(std::move(a));
  }
  return out;
}

void write_run_csv(std::ostream& out, const RunResult& result) {
  out << "sweep_value,instance,seed,metric,value\n";
  for (const RunRow& r : result.rows) {
    out << format_double(r.sweep_value) << ',' << r.instance << ',' << r.seed << ',' << r.metric
        << ',' << format_double(r.value) << '\n';
  }
}

RunResult read_run_csv(std::istream& in) {
  RunResult result;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      if (line != "sweep_value,instance,seed,metric,value") {
        throw ConfigError("results CSV: unexpected header '" + line + "'");
      }
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    f.push_back(rest);
    if (f.size() != 5) throw ConfigError("results CSV: expected 5 fields");
    RunRow r;
    r.sweep_value = parse_number(f[0]);
    r.instance = static_cast<std::size_t>(parse_number(f[1]));
    r.seed = static_cast<std::uint64_t>(parse_number(f[2]));
    r.metric = std::string(f[3]);
    r.value = parse_number(f[4]);
    result.rows.push_back(std::move(r));
  }
  return result;
}

void write_summary_csv(std::ostream& out, std::span<const Aggregate> summary) {
  out << "sweep_value,metric,mean,sd,count\n";
  for (const Aggregate& a : summary) {
    out << format_double(a.sweep_value) << ',' << a.metric << ',' << format_double(a.mean) << ','
        << format_double(a.sd) << ',' << a.count << '\n';
  }
}

EmbedMethod parse_embed_method(std::string_view name) {
  if (name == "signed_spectral") return EmbedMethod::signed_spectral;
  if (name == "hermitian_spectral") return EmbedMethod::hermitian_spectral;
  if (name == "degree_only" || name == "signed_degree") return EmbedMethod::degree_only;
  throw ConfigError("unknown embedding '" + std::string(name) + "'");
}

EdgeFeatureMap parse_edge_feature_map(std::string_view name) {
  if (name == "concat") return EdgeFeatureMap::concat;
  if (name == "hadamard") return EdgeFeatureMap::hadamard;
  if (name == "difference") return EdgeFeatureMap::difference;
  throw ConfigError("unknown edge feature map '" + std::string(name) + "'");
}

RealMatrix link_embedding(const SignedDirectedGraph& observed, EmbedMethod method, std::size_t dim) {
  const FeatureMatrix degree = signed_degree_features(observed);
  const std::size_t k = std::min(dim, observed.num_nodes());
  switch (method) {
    case EmbedMethod::signed_spectral:
      return concat_features(signed_spectral_features(observed, k), degree).values;
    case EmbedMethod::hermitian_spectral:
      return concat_features(hermitian_spectral_features(observed, k), degree).values;
    case EmbedMethod::degree_only: return degree.values;
  }
  return degree.values;
}

RunResult linkpred_run(const SignedDirectedGraph& g, const LinkPredConfig& config) {
  RunResult result;
  const std::size_t classes = num_classes(config.task);
  for (std::uint64_t seed : config.seeds) {
    CounterRng rng(seed, 0x4C50);
    const LinkTaskSplit split = link_class_split(g, config.task, config.split, rng);
    if (split.test.empty()) throw ConfigError("linkpred: test fold is empty");
    const RealMatrix nodes = link_embedding(split.observed_graph, config.embed, config.dim);

    RealMatrix train_x = edge_features(nodes, split.train, config.edge_features);
    RealMatrix test_x = edge_features(nodes, split.test, config.edge_features);
    const Standardizer z = Standardizer::fit(train_x);
    z.apply(train_x);
    z.apply(test_x);
    const std::vector<int> train_y = labels_of(split.train);
    const std::vector<int> test_y = labels_of(split.test);

    const LogisticModel model = logistic_train(train_x, train_y, classes, config.logistic);
    const std::vector<int> pred = model.predict(test_x);

    std::vector<std::size_t> train_counts(classes, 0);
    for (int y : train_y) ++train_counts[static_cast<std::size_t>(y)];
    const auto majority = static_cast<int>(
        std::max_element(train_counts.begin(), train_counts.end()) - train_counts.begin());
    const double majority_rate =
        static_cast<double>(std::count(test_y.begin(), test_y.end(), majority)) /
        static_cast<double>(test_y.size());

    result.rows.push_back({0.0, 0, seed, "accuracy", accuracy(pred, test_y)});
    result.rows.push_back({0.0, 0, seed, "majority_rate", majority_rate});
    if (classes == 2) {
      const RealMatrix proba = model.predict_proba(test_x);
      std::vector<double> scores(test_y.size());
      for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = proba(i, 1);
      const bool both = std::count(test_y.begin(), test_y.end(), 1) > 0 &&
                        std::count(test_y.begin(), test_y.end(), 0) > 0;
      if (both) result.rows.push_back({0.0, 0, seed, "auc", auc(scores, test_y)});
      result.rows.push_back({0.0, 0, seed, "macro_f1", macro_f1(pred, test_y)});
    }
  }
  result.sort_rows();
  return result;
}

RunResult cluster_sweep(const SweepConfig& config) {
  if (config.values.empty()) throw ConfigError("sweep: no sweep values");
  if (config.instances == 0) throw ConfigError("sweep: instances must be positive");
  if (config.seeds.empty()) throw ConfigError("sweep: no seeds");
  RunResult result;
  for (double value : config.values) {
    for (std::size_t inst = 0; inst < config.instances; ++inst) {
      ParamRecord params = config.generator;
      params.set(config.sweep_key, value);
      params.set("seed", CounterRng::derive_key(config.base_seed, inst));
      const GeneratedInstance g = generate(params);
      const RealMatrix embedding =
          spectral_embedding(g.graph, config.method, g.num_clusters, config.cluster);
      for (std::uint64_t seed : config.seeds) {
        const CounterRng rng(seed, inst);
        const NodeSplit masks = node_split(g.labels, config.split, rng.fork(1));
        const ClusterResult c =
            cluster_embedding(embedding, g.num_clusters, rng.fork(2), config.cluster.kmeans);
        std::vector<int> truth, pred;
        for (std::size_t i = 0; i < g.labels.size(); ++i) {
          if (!masks.test[0][i]) continue;
          truth.push_back(g.labels[i]);
          pred.push_back(c.labels[i]);
        }
        result.rows.push_back({value, inst, seed, "ari", ari(pred, truth)});
      }
    }
  }
  result.sort_rows();
  return result;
}

ParamRecord section(const ParamRecord& config, std::string_view name) {
  ParamRecord out;
  const std::string prefix = std::string(name) + ".";
  for (const auto& [k, v] : config.entries()) {
    if (k.starts_with(prefix)) out.set(k.substr(prefix.size()), v);
  }
  return out;
}

SweepConfig sweep_config(const ParamRecord& config) {
  SweepConfig s;
  s.generator = section(config, "generator");
  const ParamRecord sweep = section(config, "sweep");
  s.sweep_key = sweep.get_string("key", s.sweep_key);
  s.values = sweep.get_doubles("values", s.values);
  s.instances = static_cast<std::size_t>(sweep.get_int("instances", 5));
  s.seeds = to_seeds(config.get_ints("seeds", {0, 1}));
  s.base_seed = config.get_seed("seed", 0);
  s.method = parse_cluster_method(config.get_string("method", "hermitian_imbalance"));
  const ParamRecord cluster = section(config, "cluster");
  s.cluster.q = cluster.get_double("q", s.cluster.q);
  s.cluster.kmeans.restarts = static_cast<std::size_t>(cluster.get_int("restarts", 10));
  s.cluster.kmeans.max_iter = static_cast<std::size_t>(cluster.get_int("max_iter", 100));
  const ParamRecord split = section(config, "split");
  s.split.train_frac = split.get_double("train_frac", s.split.train_frac);
  s.split.val_frac = split.get_double("val_frac", s.split.val_frac);
  s.split.test_frac = split.get_double("test_frac", s.split.test_frac);
  s.split.seed_frac = split.get_double("seed_frac", s.split.seed_frac);
  return s;
}

LinkPredConfig linkpred_config(const ParamRecord& config) {
  LinkPredConfig c;
  c.task = parse_link_task(config.get_string("task", "sign"));
  c.embed = parse_embed_method(config.get_string("embed", "signed_spectral"));
  c.dim = static_cast<std::size_t>(config.get_int("dim", 3));
  c.edge_features = parse_edge_feature_map(config.get_string("edge_features", "concat"));
  c.seeds = to_seeds(config.get_ints("seeds", {0, 1, 2, 3, 4}));
  const ParamRecord split = section(config, "split");
  c.split.prob_val = split.get_double("prob_val", c.split.prob_val);
  c.split.prob_test = split.get_double("prob_test", c.split.prob_test);
  c.split.maintain_connectedness =
      split.get_bool("maintain_connectedness", c.split.maintain_connectedness);
  const ParamRecord logistic = section(config, "logistic");
  c.logistic.lr = logistic.get_double("lr", c.logistic.lr);
  c.logistic.epochs = static_cast<std::size_t>(logistic.get_int("epochs", 500));
  c.logistic.l2 = logistic.get_double("l2", c.logistic.l2);
  return c;
}

}  // namespace sdg
