// sdg: generate, split, cluster and score signed/directed networks.
//
//   sdg [--seed N] [--config file.toml] [--out dir] [--param key=value]... <command>
//
// Every command reads its parameters from one merged record: config file,
// then --param overrides, then --seed. Outputs land in --out and always
// include params.toml, the exact record that produced them.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdg/clustering.hpp"
#include "sdg/generators.hpp"
#include "sdg/io.hpp"
#include "sdg/metrics.hpp"
#include "sdg/pipeline.hpp"
#include "sdg/splitters.hpp"

namespace fs = std::filesystem;
using namespace sdg;

namespace {

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> params;
  std::string input;
  std::string labels;
  std::string truth;
  std::string pred;
  std::string kind = "node";
};

struct LoadedGraph {
  SignedDirectedGraph graph;
  std::optional<std::vector<int>> labels;
  std::size_t clusters = 0;
  ParamRecord generator;  // empty when read from disk
};

ParamRecord merged_config(const Options& opt) {
  ParamRecord cfg = opt.config_path.empty() ? ParamRecord{} : ParamRecord::load(opt.config_path);
  for (const std::string& kv : opt.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.seed) cfg.set("seed", *opt.seed);
  if (!opt.input.empty()) cfg.set("input", opt.input);
  if (!opt.labels.empty()) cfg.set("labels", opt.labels);
  if (!opt.truth.empty()) cfg.set("truth", opt.truth);
  if (!opt.pred.empty()) cfg.set("pred", opt.pred);
  return cfg;
}

ParamRecord generator_params(const ParamRecord& cfg) {
  ParamRecord gen = section(cfg, "generator");
  if (!gen.contains("seed")) gen.set("seed", cfg.get_string("seed", "0"));
  return gen;
}

LoadedGraph load_graph(const ParamRecord& cfg) {
  LoadedGraph out;
  if (cfg.contains("input")) {
    out.graph = read_edge_tsv_file(cfg.get_string("input", ""));
    if (cfg.contains("labels")) {
      out.labels = read_labels_csv_file(cfg.get_string("labels", ""));
      if (out.labels->size() != out.graph.num_nodes()) {
        throw ConfigError("labels file does not cover every node");
      }
      int top = -1;
      for (int l : *out.labels) top = std::max(top, l);
      out.clusters = static_cast<std::size_t>(top + 1);
    }
    return out;
  }
  out.generator = generator_params(cfg);
  if (!out.generator.contains("model")) {
    throw ConfigError("no input graph: set input=<edges.tsv> or a [generator] section");
  }
  GeneratedInstance inst = generate(out.generator);
  out.graph = std::move(inst.graph);
  out.labels = std::move(inst.labels);
  out.clusters = inst.num_clusters;
  return out;
}

fs::path prepare_out(const Options& opt) {
  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  return f;
}

void write_params(const fs::path& dir, const ParamRecord& cfg) {
  open_out(dir / "params.toml") << cfg.to_toml();
}

int run_generate(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  const GeneratedInstance inst = generate(generator_params(cfg));
  const fs::path dir = prepare_out(opt);
  {
    auto f = open_out(dir / "graph.tsv");
    write_edge_tsv(f, inst.graph, &inst.params);
  }
  {
    auto f = open_out(dir / "labels.csv");
    write_labels_csv(f, inst.labels);
  }
  write_params(dir, cfg);
  std::cerr << "generated " << inst.graph.num_nodes() << " nodes, " << inst.graph.num_edges()
            << " edges\n";
  return 0;
}

int run_split(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  const LoadedGraph g = load_graph(cfg);
  const fs::path dir = prepare_out(opt);
  const ParamRecord sp = section(cfg, "split");
  const std::string kind = cfg.get_string("split.kind", opt.kind);
  const CounterRng rng(cfg.get_seed("seed", 0), 0x5E);
  if (kind == "node") {
    if (!g.labels) throw ConfigError("node split needs labels");
    NodeSplitParams p;
    p.train_frac = sp.get_double("train_frac", p.train_frac);
    p.val_frac = sp.get_double("val_frac", p.val_frac);
    p.test_frac = sp.get_double("test_frac", p.test_frac);
    p.seed_frac = sp.get_double("seed_frac", p.seed_frac);
    p.num_splits = static_cast<std::size_t>(sp.get_int("num_splits", 1));
    const NodeSplit split = node_split(*g.labels, p, rng);
    auto f = open_out(dir / "node_split.csv");
    write_node_split_csv(f, split);
  } else if (kind == "link") {
    LinkSplitParams p;
    p.prob_val = sp.get_double("prob_val", p.prob_val);
    p.prob_test = sp.get_double("prob_test", p.prob_test);
    p.maintain_connectedness = sp.get_bool("maintain_connectedness", p.maintain_connectedness);
    CounterRng stream = rng.fork(1);
    const LinkTaskSplit split =
        link_class_split(g.graph, parse_link_task(cfg.get_string("task", "sign")), p, stream);
    {
      auto f = open_out(dir / "link_split.csv");
      write_link_split_csv(f, split);
    }
    {
      auto f = open_out(dir / "discarded.csv");
      write_discarded_csv(f, split);
    }
    auto f = open_out(dir / "observed.tsv");
    write_edge_tsv(f, split.observed_graph, &cfg);
  } else {
    throw ConfigError("split kind must be node or link");
  }
  write_params(dir, cfg);
  return 0;
}

std::vector<MetricReport> partition_metrics(const SignedDirectedGraph& g, const std::vector<int>& pred,
                                            const SoftAssignment& soft,
                                            const std::optional<std::vector<int>>& truth) {
  std::vector<MetricReport> out;
  const std::size_t m = g.num_edges();
  if (truth) out.push_back({"ari", ari(pred, *truth), pred.size()});
  if (m > 0) {
    out.push_back({"unhappy_ratio", unhappy_ratio(g, pred), m});
    out.push_back({"pbnc_loss", pbnc_loss(g, soft), soft.clusters()});
    if (soft.clusters() >= 2) out.push_back({"prob_imbalance", prob_imbalance(g, soft), soft.clusters()});
  }
  return out;
}

int run_cluster(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  const LoadedGraph g = load_graph(cfg);
  const auto k = static_cast<std::size_t>(cfg.get_int("K", static_cast<std::int64_t>(g.clusters)));
  if (k == 0) throw ConfigError("cluster: set K or provide labels");
  const SweepConfig sc = sweep_config(cfg);  // method and [cluster] keys
  const CounterRng rng(cfg.get_seed("seed", 0), 0xC1);
  const ClusterResult result = spectral_cluster(g.graph, sc.method, k, rng, sc.cluster);

  const fs::path dir = prepare_out(opt);
  {
    auto f = open_out(dir / "clusters.csv");
    write_labels_csv(f, result.labels, "cluster");
  }
  {
    auto f = open_out(dir / "soft.csv");
    f << "node";
    for (std::size_t c = 0; c < k; ++c) f << ",p" << c;
    f << '\n';
    for (std::size_t i = 0; i < result.soft.p.rows(); ++i) {
      f << i;
      for (double v : result.soft.p.row(i)) f << ',' << format_double(v);
      f << '\n';
    }
  }
  {
    auto f = open_out(dir / "metrics.csv");
    write_metric_reports(f, partition_metrics(g.graph, result.labels, result.soft, g.labels), cfg.hash());
  }
  write_params(dir, cfg);
  return 0;
}

int run_linkpred(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  const LoadedGraph g = load_graph(cfg);
  const RunResult result = linkpred_run(g.graph, linkpred_config(cfg));
  const fs::path dir = prepare_out(opt);
  {
    auto f = open_out(dir / "results.csv");
    write_run_csv(f, result);
  }
  {
    auto f = open_out(dir / "summary.csv");
    write_summary_csv(f, result.summary());
  }
  write_params(dir, cfg);
  return 0;
}

int run_sweep(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  const SweepConfig sc = sweep_config(cfg);
  const RunResult result = cluster_sweep(sc);
  const auto summary = result.summary();
  const fs::path dir = prepare_out(opt);
  {
    auto f = open_out(dir / "sweep.csv");
    write_run_csv(f, result);
  }
  {
    auto f = open_out(dir / "summary.csv");
    write_summary_csv(f, summary);
  }
  std::vector<PlotPoint> points;
  for (const Aggregate& a : summary) points.push_back({a.sweep_value, a.mean, a.sd});
  const std::string title = std::string(to_string(sc.method)) + " on " +
                            sc.generator.get_string("model", "?");
  open_out(dir / "sweep.svg") << error_bar_svg(points, title, sc.sweep_key, "test ARI", &cfg);
  write_params(dir, cfg);
  return 0;
}

int run_metrics(const Options& opt) {
  const ParamRecord cfg = merged_config(opt);
  if (!cfg.contains("input") || !cfg.contains("pred")) {
    throw ConfigError("metrics needs --input <edges.tsv> and --pred <labels.csv>");
  }
  const SignedDirectedGraph g = read_edge_tsv_file(cfg.get_string("input", ""));
  const std::vector<int> pred = read_labels_csv_file(cfg.get_string("pred", ""));
  if (pred.size() != g.num_nodes()) throw ConfigError("prediction file does not cover every node");
  std::optional<std::vector<int>> truth;
  if (cfg.contains("truth")) truth = read_labels_csv_file(cfg.get_string("truth", ""));
  int top = 0;
  for (int l : pred) {
    if (l < 0) throw ConfigError("predicted labels must be nonnegative");
    top = std::max(top, l);
  }
  const SoftAssignment soft = SoftAssignment::one_hot(pred, static_cast<std::size_t>(top + 1));
  std::vector<MetricReport> reports = partition_metrics(g, pred, soft, truth);
  if (g.num_edges() > 0) reports.push_back({"happy_ratio", happy_ratio(g, pred), g.num_edges()});
  try {
    reports.push_back({"balanced_triangle_ratio", balanced_triangle_ratio(g), g.num_edges()});
  } catch (const ConfigError&) {
    // no triangles: the statistic is undefined and simply omitted
  }
  const fs::path dir = prepare_out(opt);
  {
    auto f = open_out(dir / "metrics.csv");
    write_metric_reports(f, reports, cfg.hash());
  }
  write_params(dir, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed and directed network benchmarks"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
  app.add_option("--config", opt.config_path, "TOML-style key = value config file");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--param", opt.params, "Override a config key (key=value), repeatable");
  app.fallthrough();

  auto* gen = app.add_subcommand("generate", "Sample a synthetic graph");
  auto* split = app.add_subcommand("split", "Node or link train/val/test splits");
  split->add_option("--kind", opt.kind, "node or link")->check(CLI::IsMember({"node", "link"}));
  auto* cluster = app.add_subcommand("cluster", "Spectral clustering");
  auto* linkpred = app.add_subcommand("linkpred", "Link task prediction with logistic regression");
  auto* sweep = app.add_subcommand("sweep", "Clustering ARI over a parameter sweep");
  auto* metrics = app.add_subcommand("metrics", "Score a labelling of a graph");
  for (auto* sub : {split, cluster, linkpred}) {
    sub->add_option("--input", opt.input, "Edge list TSV");
    sub->add_option("--labels", opt.labels, "Node labels CSV");
  }
  metrics->add_option("--input", opt.input, "Edge list TSV")->required();
  metrics->add_option("--pred", opt.pred, "Predicted labels CSV")->required();
  metrics->add_option("--truth", opt.truth, "True labels CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (seed_opt->count() > 0) opt.seed = seed;

  try {
    if (gen->parsed()) return run_generate(opt);
    if (split->parsed()) return run_split(opt);
    if (cluster->parsed()) return run_cluster(opt);
    if (linkpred->parsed()) return run_linkpred(opt);
    if (sweep->parsed()) return run_sweep(opt);
    if (metrics->parsed()) return run_metrics(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
