#include "sdg/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sdg/kernels.hpp"

namespace sdg {

double logistic_objective(const RealMatrix& weights, const RealMatrix& x, std::span<const int> y,
                          double l2, RealMatrix* gradient) {
  std::vector<RealMatrix> partial;
  std::vector<double> loss_partial;
  kernels::parallel::softmax_gradient_blocks(x, y, weights, partial, loss_partial);
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  const std::size_t dim = x.cols();
  double loss = 0.0;
  for (double l : loss_partial) loss += l;
  loss *= inv_n;
  double penalty = 0.0;
  for (std::size_t c = 0; c < weights.rows(); ++c)
    for (std::size_t j = 0; j < dim; ++j) penalty += weights(c, j) * weights(c, j);
  loss += 0.5 * l2 * penalty;
  if (gradient) {
    RealMatrix g(weights.rows(), dim + 1);
    for (const RealMatrix& block : partial)
      for (std::size_t i = 0; i < block.values().size(); ++i) g.data()[i] += block.data()[i];
    for (std::size_t c = 0; c < weights.rows(); ++c) {
      for (std::size_t j = 0; j <= dim; ++j) {
        g(c, j) *= inv_n;
        if (j < dim) g(c, j) += l2 * weights(c, j);
      }
    }
    *gradient = std::move(g);
  }
  return loss;
}

LogisticModel logistic_train(const RealMatrix& x, std::span<const int> y, std::size_t classes,
                             const LogisticParams& params) {
  if (x.rows() != y.size()) throw ConfigError("logistic_train: row count differs from labels");
  if (x.rows() == 0) throw ConfigError("logistic_train: no samples");
  std::set<int> seen;
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw ConfigError("logistic_train: label outside [0, classes)");
    }
    seen.insert(label);
  }
  if (seen.size() < 2) throw ConfigError("logistic_train: need at least two classes present");
  for (const double v : x.values())
    if (!std::isfinite(v)) throw NumericError("logistic_train: non-finite feature");

  LogisticModel model;
  model.weights = RealMatrix(classes, x.cols() + 1);
  RealMatrix grad;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    model.loss_history.push_back(logistic_objective(model.weights, x, y, params.l2, &grad));
    for (std::size_t i = 0; i < grad.values().size(); ++i) {
      model.weights.data()[i] -= params.lr * grad.data()[i];
    }
  }
  model.loss_history.push_back(logistic_objective(model.weights, x, y, params.l2));
  if (!std::isfinite(model.loss_history.back())) throw NumericError("logistic_train: diverged");
  return model;
}

RealMatrix LogisticModel::predict_proba(const RealMatrix& x) const {
  const std::size_t k = classes();
  const std::size_t dim = x.cols();
  if (dim + 1 != weights.cols()) throw ConfigError("predict: feature width differs from training");
  RealMatrix out(x.rows(), k);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double peak = -INFINITY;
    for (std::size_t c = 0; c < k; ++c) {
      double z = weights(c, dim);
      for (std::size_t j = 0; j < dim; ++j) z += weights(c, j) * x(i, j);
      out(i, c) = z;
      peak = std::max(peak, z);
    }
    double total = 0.0;
    for (double& v : out.row(i)) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : out.row(i)) v /= total;
  }
  return out;
}

std::vector<int> LogisticModel::predict(const RealMatrix& x) const {
  const RealMatrix p = predict_proba(x);
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = p.row(i);
    out[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

}  // namespace sdg
