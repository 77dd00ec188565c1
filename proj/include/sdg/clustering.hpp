#pragma once

#include <string_view>
#include <vector>

#include "sdg/graph.hpp"
#include "sdg/metrics.hpp"
#include "sdg/rng.hpp"

namespace sdg {

struct KMeansParams {
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

struct KMeansResult {
  std::vector<int> labels;
  RealMatrix centroids;
  double inertia = 0.0;
};

/// k-means++ seeding and Lloyd iterations; keeps the restart with the lowest
/// inertia (earliest on ties). Restart r draws from rng.fork(r), so the result
/// depends only on the generator's key.
KMeansResult kmeans(const RealMatrix& x, std::size_t k, const CounterRng& rng,
                    const KMeansParams& params = {});

enum class ClusterMethod {
  normalized_laplacian,
  signed_laplacian,
  signed_laplacian_sym,
  magnetic_laplacian,
  signed_magnetic_laplacian,
  hermitian_imbalance,
  signed_spectral,
  hermitian_spectral,
  signed_degree,
};

std::string_view to_string(ClusterMethod method);
ClusterMethod parse_cluster_method(std::string_view name);

struct ClusterParams {
  double q = 0.25;  // magnetic kinds; always normalized
  KMeansParams kmeans;
};

struct ClusterResult {
  std::vector<int> labels;
  SoftAssignment soft;
  RealMatrix embedding;
};

/// Row-normalized node embedding used by spectral_cluster. Laplacian kinds use
/// the K smallest eigenvectors, the Hermitian kinds the 2 * floor(K / 2)
/// largest |lambda| ones; complex vectors are stacked as [Re | Im].
/// Throws ConfigError when the method cannot see any structure in g
/// (hermitian_imbalance on an undirected graph).
RealMatrix spectral_embedding(const SignedDirectedGraph& g, ClusterMethod method, std::size_t k,
                              const ClusterParams& params = {});

/// k-means on an embedding; soft assignment is softmax(-distance to centroid).
ClusterResult cluster_embedding(RealMatrix embedding, std::size_t k, const CounterRng& rng,
                                const KMeansParams& params = {});

ClusterResult spectral_cluster(const SignedDirectedGraph& g, ClusterMethod method, std::size_t k,
                               const CounterRng& rng, const ClusterParams& params = {});

}  // namespace sdg
