#pragma once

#include "mldnn/error.hpp"
#include "mldnn/tensor.hpp"

namespace mldnn {

/// Actual and predicted values, both N×1 in the target's units.
struct EvalPair {
  Matrix actual;
  Matrix predicted;
};

struct MetricsReport {
  double r2 = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// R² is undefined when every actual value is the same.
class MetricError : public Error {
 public:
  using Error::Error;
};

// All sums run in row order.
double r2(const EvalPair& p);
double mae(const EvalPair& p);
double mse(const EvalPair& p);
double rmse(const EvalPair& p);

MetricsReport compute_metrics(const EvalPair& p);

}  // namespace mldnn
