#pragma once

#include <span>
#include <vector>

#include "sdg/common.hpp"

namespace sdg {

struct LogisticParams {
  double lr = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;  // bias column is not penalized
};

/// Multinomial logistic regression. weights is classes x (dim + 1), bias last.
struct LogisticModel {
  RealMatrix weights;
  /// Objective before each update and after the last one (epochs + 1 values).
  std::vector<double> loss_history;

  std::size_t classes() const noexcept { return weights.rows(); }
  RealMatrix predict_proba(const RealMatrix& x) const;
  std::vector<int> predict(const RealMatrix& x) const;
};

/// Mean cross-entropy plus (l2 / 2) * ||W without bias||^2, and its gradient.
double logistic_objective(const RealMatrix& weights, const RealMatrix& x, std::span<const int> y,
                          double l2, RealMatrix* gradient = nullptr);

/// Full-batch gradient descent from zero weights. Throws ConfigError when
/// fewer than two classes occur in y or a label is outside [0, classes).
LogisticModel logistic_train(const RealMatrix& x, std::span<const int> y, std::size_t classes,
                             const LogisticParams& params = {});

}  // namespace sdg
