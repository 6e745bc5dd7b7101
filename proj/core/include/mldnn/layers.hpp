#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mldnn/tensor.hpp"

namespace mldnn {

enum class Activation { relu, linear };
enum class Mode { train, infer };

std::string_view to_string(Activation a) noexcept;

/// Weights (in_dim × out_dim) and bias (1 × out_dim) of one dense layer.
struct DenseParams {
  Matrix weights;
  Matrix bias;
};

/// Values recorded by a train-mode forward pass for use by backward.
/// Dense layers fill input/net_input/output; batch norm also fills the
/// batch statistics and the normalized activations.
struct ActivationCache {
  Matrix input;
  Matrix net_input;
  Matrix output;
  Matrix batch_mean;
  Matrix batch_var;
  Matrix inv_std;
  Matrix normalized;
  bool populated = false;
};

struct BatchNormState {
  Matrix gamma;
  Matrix beta;
  Matrix running_mean;
  Matrix running_var;
  double momentum = 0.99;
  double epsilon = 1e-3;

  /// gamma = 1, beta = 0, running mean 0, running variance 1.
  static BatchNormState make(std::size_t width, double momentum = 0.99, double epsilon = 1e-3);
  std::size_t width() const noexcept { return gamma.cols(); }
};

struct LayerOutput {
  Matrix output;
  ActivationCache cache;
};

struct DenseGradients {
  Matrix input;
  Matrix weights;
  Matrix bias;
};

struct BatchNormGradients {
  Matrix input;
  Matrix gamma;
  Matrix beta;
};

struct LossResult {
  double loss = 0.0;
  Matrix grad;
};

// g(x·W + b). The cache is only filled in train mode.
LayerOutput dense_forward(const Matrix& x, const DenseParams& p, Activation activation, Mode mode);
DenseGradients dense_backward(const Matrix& grad_output, const DenseParams& p,
                              Activation activation, const ActivationCache& cache);

Matrix relu(const Matrix& x);
/// Passes grad where x > 0; the subgradient at exactly 0 is 0.
Matrix relu_backward(const Matrix& grad_output, const Matrix& x);

/// Train mode normalizes with population batch statistics and updates the
/// running statistics in `state`; infer mode reads the running statistics
/// and leaves `state` untouched.
LayerOutput batchnorm_forward(const Matrix& x, BatchNormState& state, Mode mode);
/// Infer-mode forward that takes the state by const reference.
Matrix batchnorm_infer(const Matrix& x, const BatchNormState& state);
BatchNormGradients batchnorm_backward(const Matrix& grad_output, const BatchNormState& state,
                                      const ActivationCache& cache);

/// Column-wise concatenation in list order.
Matrix concat(const std::vector<Matrix>& parts);
/// Splits an upstream gradient back into blocks of the given widths.
std::vector<Matrix> concat_backward(const Matrix& grad_output, const std::vector<std::size_t>& widths);

/// Mean squared error over an N×1 prediction and its gradient (2/N)(pred − target).
LossResult mse_loss(const Matrix& pred, const Matrix& target);

}  // namespace mldnn
