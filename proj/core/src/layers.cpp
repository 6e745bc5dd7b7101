#include "mldnn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mldnn/error.hpp"

namespace mldnn {

std::string_view to_string(Activation a) noexcept {
  return a == Activation::relu ? "relu" : "linear";
}

BatchNormState BatchNormState::make(std::size_t width, double momentum, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("batch norm epsilon must be positive");
  if (!(momentum > 0.0 && momentum < 1.0)) throw ConfigError("batch norm momentum must lie in (0, 1)");
  BatchNormState s;
  s.gamma = Matrix(1, width, 1.0);
  s.beta = Matrix(1, width, 0.0);
  s.running_mean = Matrix(1, width, 0.0);
  s.running_var = Matrix(1, width, 1.0);
  s.momentum = momentum;
  s.epsilon = epsilon;
  return s;
}

LayerOutput dense_forward(const Matrix& x, const DenseParams& p, Activation activation, Mode mode) {
  if (x.cols() != p.weights.rows()) {
    throw ShapeError("dense input " + x.shape_string() + " does not match weights " +
                     p.weights.shape_string());
  }
  Matrix z = add(matmul(x, p.weights), p.bias);
  Matrix out = activation == Activation::relu ? relu(z) : z;
  LayerOutput result;
  if (mode == Mode::train) {
    result.cache.input = x;
    result.cache.net_input = std::move(z);
    result.cache.output = out;
    result.cache.populated = true;
  }
  result.output = std::move(out);
  return result;
}

DenseGradients dense_backward(const Matrix& grad_output, const DenseParams& p,
                              Activation activation, const ActivationCache& cache) {
  if (!cache.populated) throw StateError("dense backward called without a train-mode forward");
  if (!grad_output.same_shape(cache.net_input)) {
    throw ShapeError("dense upstream gradient " + grad_output.shape_string() +
                     " does not match layer output " + cache.net_input.shape_string());
  }
  const Matrix grad_z =
      activation == Activation::relu ? relu_backward(grad_output, cache.net_input) : grad_output;
  DenseGradients g;
  g.weights = matmul(cache.input, grad_z, true, false);
  g.bias = column_sums(grad_z);
  g.input = matmul(grad_z, p.weights, false, true);
  return g;
}

Matrix relu(const Matrix& x) {
  Matrix out = x;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Matrix relu_backward(const Matrix& grad_output, const Matrix& x) {
  if (!grad_output.same_shape(x)) {
    throw ShapeError("relu backward shape mismatch: " + grad_output.shape_string() + " vs " +
                     x.shape_string());
  }
  Matrix out(x.rows(), x.cols());
  const auto xs = x.data();
  const auto gs = grad_output.data();
  auto os = out.data();
  for (std::size_t i = 0; i < xs.size(); ++i) os[i] = xs[i] > 0.0 ? gs[i] : 0.0;
  return out;
}

namespace {

void check_bn_width(const Matrix& x, const BatchNormState& state) {
  if (x.cols() != state.width()) {
    throw ShapeError("batch norm input " + x.shape_string() + " does not match state width " +
                     std::to_string(state.width()));
  }
}

}  // namespace

Matrix batchnorm_infer(const Matrix& x, const BatchNormState& state) {
  check_bn_width(x, state);
  const std::size_t d = x.cols();
  std::vector<double> inv_std(d);
  for (std::size_t c = 0; c < d; ++c)
    inv_std[c] = 1.0 / std::sqrt(state.running_var(0, c) + state.epsilon);
  Matrix out(x.rows(), d);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < d; ++c)
      out(r, c) = state.gamma(0, c) * ((x(r, c) - state.running_mean(0, c)) * inv_std[c]) +
                  state.beta(0, c);
  return out;
}

LayerOutput batchnorm_forward(const Matrix& x, BatchNormState& state, Mode mode) {
  if (mode == Mode::infer) return {batchnorm_infer(x, state), {}};

  check_bn_width(x, state);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) {
    throw ConfigError("batch norm in train mode needs at least 2 rows, got " + std::to_string(n));
  }
  const double inv_n = 1.0 / static_cast<double>(n);

  Matrix mean = scale(column_sums(x), inv_n);
  Matrix var(1, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = x(r, c) - mean(0, c);
      var(0, c) += diff * diff;
    }
  var = scale(var, inv_n);

  Matrix inv_std(1, d);
  for (std::size_t c = 0; c < d; ++c) inv_std(0, c) = 1.0 / std::sqrt(var(0, c) + state.epsilon);

  Matrix normalized(n, d);
  Matrix out(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      normalized(r, c) = (x(r, c) - mean(0, c)) * inv_std(0, c);
      out(r, c) = state.gamma(0, c) * normalized(r, c) + state.beta(0, c);
    }

  const double m = state.momentum;
  for (std::size_t c = 0; c < d; ++c) {
    state.running_mean(0, c) = m * state.running_mean(0, c) + (1.0 - m) * mean(0, c);
    state.running_var(0, c) = m * state.running_var(0, c) + (1.0 - m) * var(0, c);
  }

  LayerOutput result;
  result.cache.input = x;
  result.cache.batch_mean = std::move(mean);
  result.cache.batch_var = std::move(var);
  result.cache.inv_std = std::move(inv_std);
  result.cache.normalized = std::move(normalized);
  result.cache.output = out;
  result.cache.populated = true;
  result.output = std::move(out);
  return result;
}

BatchNormGradients batchnorm_backward(const Matrix& grad_output, const BatchNormState& state,
                                      const ActivationCache& cache) {
  if (!cache.populated) throw StateError("batch norm backward called without a train-mode forward");
  if (!grad_output.same_shape(cache.normalized)) {
    throw ShapeError("batch norm upstream gradient " + grad_output.shape_string() +
                     " does not match layer output " + cache.normalized.shape_string());
  }
  const std::size_t n = grad_output.rows();
  const std::size_t d = grad_output.cols();
  const double nd = static_cast<double>(n);

  BatchNormGradients g;
  g.beta = column_sums(grad_output);
  g.gamma = column_sums(mul(grad_output, cache.normalized));
  g.input = Matrix(n, d);
  // dx = γ·inv_std/N · (N·dy − Σdy − x̂·Σ(dy·x̂))
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double k = state.gamma(0, c) * cache.inv_std(0, c) / nd;
      g.input(r, c) =
          k * (nd * grad_output(r, c) - g.beta(0, c) - cache.normalized(r, c) * g.gamma(0, c));
    }
  return g;
}

Matrix concat(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw ShapeError("concat of an empty list");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) {
      throw ShapeError("concat row mismatch: " + parts.front().shape_string() + " vs " +
                       p.shape_string());
    }
    cols += p.cols();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = out.row_span(r).begin();
    for (const auto& p : parts) {
      const auto src = p.row_span(r);
      dst = std::copy(src.begin(), src.end(), dst);
    }
  }
  return out;
}

std::vector<Matrix> concat_backward(const Matrix& grad_output, const std::vector<std::size_t>& widths) {
  std::size_t total = 0;
  for (std::size_t w : widths) total += w;
  if (total != grad_output.cols()) {
    throw ShapeError("concat backward widths sum to " + std::to_string(total) +
                     " but upstream gradient is " + grad_output.shape_string());
  }
  std::vector<Matrix> parts;
  parts.reserve(widths.size());
  std::size_t offset = 0;
  for (std::size_t w : widths) {
    parts.push_back(slice_cols(grad_output, offset, w));
    offset += w;
  }
  return parts;
}

LossResult mse_loss(const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target) || pred.cols() != 1 || pred.rows() == 0) {
    throw ShapeError("mse loss expects matching non-empty Nx1 inputs, got " + pred.shape_string() +
                     " and " + target.shape_string());
  }
  const std::size_t n = pred.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  LossResult r;
  r.grad = Matrix(n, 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = pred(i, 0) - target(i, 0);
    sum += diff * diff;
    r.grad(i, 0) = 2.0 * inv_n * diff;
  }
  r.loss = sum * inv_n;
  return r;
}

}  // namespace mldnn
