#include "sdg/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdg/kernels.hpp"
#include "sdg/spectral.hpp"

namespace sdg {
namespace {

double squared_distance(const RealMatrix& x, std::size_t i, const RealMatrix& c, std::size_t k) {
  double d = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double diff = x(i, j) - c(k, j);
    d += diff * diff;
  }
  return d;
}

RealMatrix seed_centroids(const RealMatrix& x, std::size_t k, CounterRng& rng) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  RealMatrix centroids(k, d);
  std::vector<bool> taken(n, false);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  auto place = [&](std::size_t slot, std::size_t point) {
    taken[point] = true;
    for (std::size_t j = 0; j < d; ++j) centroids(slot, j) = x(point, j);
    for (std::size_t i = 0; i < n; ++i) dist2[i] = std::min(dist2[i], squared_distance(x, i, centroids, slot));
  };
  place(0, static_cast<std::size_t>(rng.below(n)));
  for (std::size_t slot = 1; slot < k; ++slot) {
    double total = 0.0;
    for (double v : dist2) total += v;
    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (dist2[i] <= 0.0) continue;
        pick = i;
        target -= dist2[i];
        if (target < 0.0) break;
      }
    } else {
      // Every point coincides with a centroid; fall back to an unused index.
      std::size_t skip = static_cast<std::size_t>(rng.below(n - slot));
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (skip-- == 0) {
          pick = i;
          break;
        }
      }
    }
    place(slot, pick);
  }
  return centroids;
}

KMeansResult lloyd(const RealMatrix& x, RealMatrix centroids, std::size_t max_iter) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t k = centroids.rows();
  std::vector<kernels::Assignment> assign(n);
  std::vector<int> labels(n, -1);
  for (std::size_t iter = 0;; ++iter) {
    kernels::parallel::assign_nearest(x, centroids, assign);
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = static_cast<int>(assign[i].cluster);
      changed |= labels[i] != c;
      labels[i] = c;
    }
    if (!changed || iter == max_iter) break;

    RealMatrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) sums(c, j) += x(i, j);
    }
    std::vector<double> slack(n);
    for (std::size_t i = 0; i < n; ++i) slack[i] = assign[i].distance2;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Reseed from the point worst served by its current centroid.
        const auto far = static_cast<std::size_t>(
            std::max_element(slack.begin(), slack.end()) - slack.begin());
        slack[far] = -1.0;
        for (std::size_t j = 0; j < d; ++j) centroids(c, j) = x(far, j);
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) {
        centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
      }
    }
  }
  KMeansResult result;
  result.labels = std::move(labels);
  result.centroids = std::move(centroids);
  for (const auto& a : assign) result.inertia += a.distance2;
  return result;
}

void normalize_rows(RealMatrix& x) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double norm = 0.0;
    for (double v : x.row(i)) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : x.row(i)) v /= norm;
  }
}

RealMatrix real_part(const ComplexMatrix& v) {
  RealMatrix out(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < v.cols(); ++j) out(i, j) = v(i, j).real();
  return out;
}

RealMatrix stacked(const ComplexMatrix& v) {
  const std::size_t k = v.cols();
  RealMatrix out(v.rows(), 2 * k);
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out(i, j) = v(i, j).real();
      out(i, k + j) = v(i, j).imag();
    }
  }
  return out;
}

std::size_t hermitian_count(std::size_t k) { return std::max<std::size_t>(1, 2 * (k / 2)); }

}  // namespace

KMeansResult kmeans(const RealMatrix& x, std::size_t k, const CounterRng& rng,
                    const KMeansParams& params) {
  if (k == 0) throw ConfigError("kmeans: K must be positive");
  if (k > x.rows()) throw ConfigError("kmeans: K exceeds the number of points");
  if (params.restarts == 0) throw ConfigError("kmeans: restarts must be positive");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < params.restarts; ++r) {
    CounterRng stream = rng.fork(r);
    KMeansResult run = lloyd(x, seed_centroids(x, k, stream), params.max_iter);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

std::string_view to_string(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::normalized_laplacian: return "normalized_laplacian";
    case ClusterMethod::signed_laplacian: return "signed_laplacian";
    case ClusterMethod::signed_laplacian_sym: return "signed_laplacian_sym";
    case ClusterMethod::magnetic_laplacian: return "magnetic_laplacian";
    case ClusterMethod::signed_magnetic_laplacian: return "signed_magnetic_laplacian";
    case ClusterMethod::hermitian_imbalance: return "hermitian_imbalance";
    case ClusterMethod::signed_spectral: return "signed_spectral";
    case ClusterMethod::hermitian_spectral: return "hermitian_spectral";
    case ClusterMethod::signed_degree: return "signed_degree";
  }
  return "normalized_laplacian";
}

ClusterMethod parse_cluster_method(std::string_view name) {
  for (auto m : {ClusterMethod::normalized_laplacian, ClusterMethod::signed_laplacian,
                 ClusterMethod::signed_laplacian_sym, ClusterMethod::magnetic_laplacian,
                 ClusterMethod::signed_magnetic_laplacian, ClusterMethod::hermitian_imbalance,
                 ClusterMethod::signed_spectral, ClusterMethod::hermitian_spectral,
                 ClusterMethod::signed_degree}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown clustering method '" + std::string(name) + "'");
}

RealMatrix spectral_embedding(const SignedDirectedGraph& g, ClusterMethod method, std::size_t k,
                              const ClusterParams& params) {
  if (k == 0 || k > g.num_nodes()) throw ConfigError("spectral embedding: need 1 <= K <= n");
  RealMatrix x;
  switch (method) {
    case ClusterMethod::normalized_laplacian:
      x = real_part(eigh(normalized_laplacian(g), k).vectors);
      break;
    case ClusterMethod::signed_laplacian:
      x = real_part(eigh(signed_laplacian(g, false), k).vectors);
      break;
    case ClusterMethod::signed_laplacian_sym:
      x = real_part(eigh(signed_laplacian(g, true), k).vectors);
      break;
    case ClusterMethod::magnetic_laplacian:
      x = stacked(eigh(magnetic_laplacian(g, params.q, true), k).vectors);
      break;
    case ClusterMethod::signed_magnetic_laplacian:
      x = stacked(eigh(signed_magnetic_laplacian(g, params.q, true), k).vectors);
      break;
    case ClusterMethod::hermitian_imbalance:
      if (!is_directed(g)) throw ConfigError("hermitian_imbalance needs a directed graph");
      x = stacked(eigh(hermitian_imbalance(g), std::min(hermitian_count(k), g.num_nodes()),
                       EigenSelection::largest_magnitude)
                      .vectors);
      break;
    case ClusterMethod::signed_spectral:
      x = signed_spectral_features(g, k).values;
      break;
    case ClusterMethod::hermitian_spectral:
      if (!is_directed(g)) throw ConfigError("hermitian_spectral needs a directed graph");
      x = hermitian_spectral_features(g, std::min(hermitian_count(k), g.num_nodes())).values;
      break;
    case ClusterMethod::signed_degree:
      x = signed_degree_features(g).values;
      break;
  }
  normalize_rows(x);
  return x;
}

ClusterResult cluster_embedding(RealMatrix embedding, std::size_t k, const CounterRng& rng,
                                const KMeansParams& params) {
  KMeansResult km = kmeans(embedding, k, rng, params);
  const std::size_t n = embedding.rows();
  ClusterResult out;
  out.soft.p = RealMatrix(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = std::sqrt(squared_distance(embedding, i, km.centroids, c));
      out.soft.p(i, c) = -dist;
      nearest = std::min(nearest, dist);
    }
    double total = 0.0;
    for (double& v : out.soft.p.row(i)) {
      v = std::exp(v + nearest);
      total += v;
    }
    for (double& v : out.soft.p.row(i)) v /= total;
  }
  out.labels = std::move(km.labels);
  out.embedding = std::move(embedding);
  return out;
}

ClusterResult spectral_cluster(const SignedDirectedGraph& g, ClusterMethod method, std::size_t k,
                               const CounterRng& rng, const ClusterParams& params) {
  return cluster_embedding(spectral_embedding(g, method, k, params), k, rng, params.kmeans);
}

}  // namespace sdg
