#include "mldnn/metrics.hpp"

#include <cmath>
#include <string>

namespace mldnn {

namespace {

void check(const EvalPair& p, std::size_t min_rows) {
  if (!p.actual.same_shape(p.predicted) || p.actual.cols() != 1) {
    throw ShapeError("metrics expect matching Nx1 inputs, got " + p.actual.shape_string() + " and " +
                     p.predicted.shape_string());
  }
  if (p.actual.rows() < min_rows) {
    throw ShapeError("metric needs at least " + std::to_string(min_rows) + " rows, got " +
                     std::to_string(p.actual.rows()));
  }
}

double squared_error_sum(const EvalPair& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.actual.rows(); ++i) {
    const double d = p.actual(i, 0) - p.predicted(i, 0);
    s += d * d;
  }
  return s;
}

}  // namespace

double r2(const EvalPair& p) {
  check(p, 2);
  const std::size_t n = p.actual.rows();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += p.actual(i, 0);
  mean /= static_cast<double>(n);
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = p.actual(i, 0) - mean;
    ss_tot += d * d;
  }
  if (!(ss_tot > 0.0)) throw MetricError("R² is undefined: all actual values are equal");
  return 1.0 - squared_error_sum(p) / ss_tot;
}

double mae(const EvalPair& p) {
  check(p, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < p.actual.rows(); ++i) s += std::abs(p.actual(i, 0) - p.predicted(i, 0));
  return s / static_cast<double>(p.actual.rows());
}

double mse(const EvalPair& p) {
  check(p, 1);
  return squared_error_sum(p) / static_cast<double>(p.actual.rows());
}

double rmse(const EvalPair& p) { return std::sqrt(mse(p)); }

MetricsReport compute_metrics(const EvalPair& p) {
  return {r2(p), mae(p), mse(p), rmse(p)};
}

}  // namespace mldnn
