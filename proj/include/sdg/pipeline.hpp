#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdg/clustering.hpp"
#include "sdg/graph.hpp"
#include "sdg/io.hpp"
#include "sdg/logistic.hpp"
#include "sdg/splitters.hpp"

namespace sdg {

struct RunRow {
  double sweep_value = 0.0;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
};

struct Aggregate {
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1), 0 for a single run
  std::size_t count = 0;
};

struct RunResult {
  std::vector<RunRow> rows;

  /// Orders rows by (sweep_value, instance, seed, metric).
  void sort_rows();
  /// Mean and sd per (sweep_value, metric), in sweep order.
  std::vector<Aggregate> summary() const;
};

/// sweep_value,instance,seed,metric,value
void write_run_csv(std::ostream& out, const RunResult& result);
RunResult read_run_csv(std::istream& in);
/// sweep_value,metric,mean,sd,count
void write_summary_csv(std::ostream& out, std::span<const Aggregate> summary);

enum class EmbedMethod { signed_spectral, hermitian_spectral, degree_only };
enum class EdgeFeatureMap { concat, hadamard, difference };

EmbedMethod parse_embed_method(std::string_view name);
EdgeFeatureMap parse_edge_feature_map(std::string_view name);

struct LinkPredConfig {
  LinkTask task = LinkTask::sign;
  EmbedMethod embed = EmbedMethod::signed_spectral;
  std::size_t dim = 3;  // spectral eigenvectors; degree features are always appended
  EdgeFeatureMap edge_features = EdgeFeatureMap::concat;
  LinkSplitParams split{0.0, 0.2, true};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  LogisticParams logistic;
};

/// Node embedding on the observed graph used by linkpred_run.
RealMatrix link_embedding(const SignedDirectedGraph& observed, EmbedMethod method, std::size_t dim);

/// Per seed: split, embed the observed graph, fit on train, score on test.
/// Metrics: accuracy and majority_rate always, auc and macro_f1 for two-class
/// tasks.
RunResult linkpred_run(const SignedDirectedGraph& g, const LinkPredConfig& config);

struct SweepConfig {
  ParamRecord generator;  // generate() keys; the swept key is overwritten
  std::string sweep_key = "eta";
  std::vector<double> values{0.0, 0.1, 0.2, 0.3, 0.4};
  std::size_t instances = 5;
  std::vector<std::uint64_t> seeds{0, 1};
  std::uint64_t base_seed = 0;
  ClusterMethod method = ClusterMethod::hermitian_imbalance;
  ClusterParams cluster;
  NodeSplitParams split;
};

/// One embedding per (sweep value, instance); every seed reruns the node split
/// and k-means, then scores ARI on the test nodes. Instance i uses the same
/// generator seed at every sweep value.
RunResult cluster_sweep(const SweepConfig& config);

/// Config readers for the CLI; keys under [generator], [split], [cluster],
/// [logistic], [sweep] sections plus top-level method/task/seeds.
ParamRecord section(const ParamRecord& config, std::string_view name);
SweepConfig sweep_config(const ParamRecord& config);
LinkPredConfig linkpred_config(const ParamRecord& config);

struct PlotPoint {
  double x = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

/// Self-contained SVG 1.1 line plot with +-1 sd error bars. Params, when
/// given, are echoed in a leading comment.
std::string error_bar_svg(std::span<const PlotPoint> points, std::string_view title,
                          std::string_view x_label, std::string_view y_label,
                          const ParamRecord* params = nullptr);

}  // namespace sdg
