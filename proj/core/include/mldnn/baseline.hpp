#pragma once

#include <string>
#include <vector>

#include "mldnn/error.hpp"
#include "mldnn/tensor.hpp"

namespace mldnn {

/// y ≈ intercept + x·coefficients
struct LinearModel {
  Matrix coefficients;  // d × 1
  double intercept = 0.0;
};

struct OlsResult {
  LinearModel model;
  Matrix predictions;
};

/// The design matrix has a column that is a linear combination of the
/// intercept and the columns before it.
class RankDeficientError : public Error {
 public:
  RankDeficientError(std::size_t column, std::string column_name);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Least squares via Householder QR of [1 | X] (no pivoting, columns taken
/// in order). A column whose R diagonal collapses below 1e-10 of its own
/// norm is reported as dependent instead of being pseudo-inverted.
/// `column_names`, when given, labels the error.
LinearModel ols_fit(const Matrix& x, const Matrix& y, const std::vector<std::string>& column_names = {});
Matrix ols_predict(const LinearModel& model, const Matrix& x);
OlsResult ols_fit_predict(const Matrix& x_train, const Matrix& y_train, const Matrix& x_eval,
                          const std::vector<std::string>& column_names = {});

}  // namespace mldnn
