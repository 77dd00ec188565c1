#include "sdg/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sdg::kernels {
namespace {

void gradient_block(const RealMatrix& x, std::span<const int> y, const RealMatrix& weights,
                    std::size_t block, RealMatrix& grad, double& loss) {
  const std::size_t classes = weights.rows();
  const std::size_t dim = x.cols();
  grad = RealMatrix(classes, dim + 1);
  loss = 0.0;
  std::vector<double> logits(classes);
  const std::size_t begin = block * kReductionBlock;
  const std::size_t end = std::min(x.rows(), begin + kReductionBlock);
  for (std::size_t i = begin; i < end; ++i) {
    const double* xi = x.data() + i * dim;
    double peak = -INFINITY;
    for (std::size_t c = 0; c < classes; ++c) {
      const double* wc = weights.data() + c * (dim + 1);
      double z = wc[dim];
      for (std::size_t j = 0; j < dim; ++j) z += wc[j] * xi[j];
      logits[c] = z;
      peak = std::max(peak, z);
    }
    double total = 0.0;
    for (double& z : logits) {
      z = std::exp(z - peak);
      total += z;
    }
    const auto label = static_cast<std::size_t>(y[i]);
    loss -= std::log(logits[label] / total);
    for (std::size_t c = 0; c < classes; ++c) {
      const double residual = logits[c] / total - (c == label ? 1.0 : 0.0);
      double* gc = grad.data() + c * (dim + 1);
      for (std::size_t j = 0; j < dim; ++j) gc[j] += residual * xi[j];
      gc[dim] += residual;
    }
  }
}

std::size_t block_count(const RealMatrix& x) {
  return (x.rows() + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace

namespace serial {

void softmax_gradient_blocks(const RealMatrix& x, std::span<const int> y,
                             const RealMatrix& weights, std::vector<RealMatrix>& partial,
                             std::vector<double>& loss_partial) {
  const std::size_t blocks = block_count(x);
  partial.resize(blocks);
  loss_partial.assign(blocks, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    gradient_block(x, y, weights, b, partial[b], loss_partial[b]);
  }
}

}  // namespace serial

namespace parallel {

void softmax_gradient_blocks(const RealMatrix& x, std::span<const int> y,
                             const RealMatrix& weights, std::vector<RealMatrix>& partial,
                             std::vector<double>& loss_partial) {
  const std::size_t blocks = block_count(x);
  partial.resize(blocks);
  loss_partial.assign(blocks, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < count; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    gradient_block(x, y, weights, ub, partial[ub], loss_partial[ub]);
  }
}

}  // namespace parallel

}  // namespace sdg::kernels
