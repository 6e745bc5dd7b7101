#include "mldnn/baseline.hpp"

#include <cmath>

namespace mldnn {

RankDeficientError::RankDeficientError(std::size_t column, std::string column_name)
    : Error("rank-deficient design: feature column " + std::to_string(column) +
            (column_name.empty() ? "" : " (" + column_name + ")") +
            " is linearly dependent on the intercept and preceding columns"),
      column_(column) {}

LinearModel ols_fit(const Matrix& x, const Matrix& y, const std::vector<std::string>& column_names) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t p = d + 1;
  if (y.rows() != n || y.cols() != 1) {
    throw ShapeError("OLS targets " + y.shape_string() + " do not match features " + x.shape_string());
  }
  if (n <= p) {
    throw ShapeError("OLS needs more than " + std::to_string(p) + " rows, got " + std::to_string(n));
  }

  // Column-major working copy of [1 | X] so each Householder sweep walks
  // contiguous memory.
  std::vector<std::vector<double>> a(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    a[0][i] = 1.0;
    for (std::size_t j = 0; j < d; ++j) a[j + 1][i] = x(i, j);
  }
  std::vector<double> rhs(y.data().begin(), y.data().end());

  std::vector<double> col_norm(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (double v : a[j]) s += v * v;
    col_norm[j] = std::sqrt(s);
  }

  for (std::size_t j = 0; j < p; ++j) {
    auto& col = a[j];
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += col[i] * col[i];
    const double norm = std::sqrt(s);
    if (!(norm > 1e-10 * col_norm[j]) || col_norm[j] == 0.0) {
      const std::size_t feature = j == 0 ? 0 : j - 1;
      std::string name = j == 0 ? "intercept"
                                : (feature < column_names.size() ? column_names[feature] : "");
      throw RankDeficientError(feature, std::move(name));
    }
    const double alpha = col[j] > 0.0 ? -norm : norm;
    std::vector<double> v(col.begin() + static_cast<std::ptrdiff_t>(j), col.end());
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;

    auto reflect = [&](std::vector<double>& target) {
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * target[j + i];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = 0; i < v.size(); ++i) target[j + i] -= f * v[i];
    };
    for (std::size_t k = j + 1; k < p; ++k) reflect(a[k]);
    reflect(rhs);
    col[j] = alpha;
    for (std::size_t i = j + 1; i < n; ++i) col[i] = 0.0;
  }

  // Back substitution on R·β = (Qᵀy)[0:p].
  std::vector<double> beta(p);
  for (std::size_t jj = p; jj-- > 0;) {
    double s = rhs[jj];
    for (std::size_t k = jj + 1; k < p; ++k) s -= a[k][jj] * beta[k];
    beta[jj] = s / a[jj][jj];
  }

  LinearModel m;
  m.intercept = beta[0];
  m.coefficients = Matrix(d, 1);
  for (std::size_t j = 0; j < d; ++j) m.coefficients(j, 0) = beta[j + 1];
  return m;
}

Matrix ols_predict(const LinearModel& model, const Matrix& x) {
  if (x.cols() != model.coefficients.rows()) {
    throw ShapeError("OLS model has " + std::to_string(model.coefficients.rows()) +
                     " coefficients, input is " + x.shape_string());
  }
  Matrix out = matmul(x, model.coefficients);
  for (double& v : out.data()) v += model.intercept;
  return out;
}

OlsResult ols_fit_predict(const Matrix& x_train, const Matrix& y_train, const Matrix& x_eval,
                          const std::vector<std::string>& column_names) {
  OlsResult r;
  r.model = ols_fit(x_train, y_train, column_names);
  r.predictions = ols_predict(r.model, x_eval);
  return r;
}

}  // namespace mldnn
