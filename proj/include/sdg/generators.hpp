#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sdg/graph.hpp"
#include "sdg/io.hpp"

namespace sdg {

struct BlockSizes {
  std::vector<std::size_t> sizes;

  std::size_t total() const noexcept;
  /// Cluster id of every node under contiguous assignment.
  std::vector<int> assignment() const;
};

/// Geometric block sizes with largest/smallest ratio about rho; rho = 1 gives
/// equal blocks with the remainder in the last one.
BlockSizes block_sizes(std::size_t n, std::size_t k, double rho);

enum class MetaKind { cycle, path, complete, star, custom };

std::string_view to_string(MetaKind kind);
MetaKind parse_meta_kind(std::string_view name);

/// Block-level edge probability (or signed weight) pattern. `filled` is what
/// the DSBM samples from: zeros outside the imbalance pattern become 0.5.
struct MetaGraph {
  RealMatrix f;
  RealMatrix filled;
  MetaKind kind = MetaKind::custom;
  bool ambient = false;

  std::size_t clusters() const noexcept { return f.rows(); }
};

/// `seed` only matters for `complete`, whose orientation per pair is random.
MetaGraph meta_graph(MetaKind kind, std::size_t k, double eta, bool ambient,
                     std::uint64_t seed = 0);

/// Wraps a signed K x K matrix for the SDSBM (filled = f).
MetaGraph custom_meta(RealMatrix f);
MetaGraph f1_meta(double gamma);
MetaGraph f2_meta(double gamma);

struct GeneratedInstance {
  SignedDirectedGraph graph;
  std::vector<int> labels;
  std::size_t num_clusters = 0;
  ParamRecord params;  // sufficient for regenerate()
};

struct SsbmParams {
  std::size_t n = 1000;
  std::size_t k = 2;
  double p_in = 0.1;
  double p_out = 0.1;
  double rho = 1.0;
  double eta_in = 0.0;
  double eta_out = 0.0;
  std::uint64_t seed = 0;

  /// Single-probability, single-noise form.
  static SsbmParams uniform(std::size_t n, std::size_t k, double p, double eta, double rho,
                            std::uint64_t seed);
};

GeneratedInstance ssbm(const SsbmParams& params);

struct PolSsbmParams {
  std::size_t n = 5000;
  std::size_t communities = 5;  // r
  double p = 0.1;
  double rho = 1.5;
  double eta = 0.0;
  std::size_t community_budget = 500;  // N: mean community size
  std::uint64_t seed = 0;
};

GeneratedInstance pol_ssbm(const PolSsbmParams& params);

struct DsbmParams {
  std::size_t n = 1000;
  double p = 0.02;
  double rho = 1.0;
  std::uint64_t seed = 0;
};

GeneratedInstance dsbm(const MetaGraph& meta, const DsbmParams& params);

struct SdsbmParams {
  std::size_t n = 1000;
  double p = 0.1;
  double rho = 1.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
};

GeneratedInstance sdsbm(const MetaGraph& meta, const SdsbmParams& params);

/// Undirected, every pair present w.p. p with sign +-1 equally likely.
SignedDirectedGraph signed_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Dispatches on params["model"] (ssbm, pol_ssbm, dsbm, sdsbm, signed_er).
GeneratedInstance generate(const ParamRecord& params);
inline GeneratedInstance regenerate(const GeneratedInstance& instance) {
  return generate(instance.params);
}

}  // namespace sdg
