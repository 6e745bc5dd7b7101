#include "mldnn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "mldnn/error.hpp"

namespace mldnn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string());
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged row literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::row(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

namespace {

std::string flag(bool t) { return t ? "T" : "N"; }

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b, bool transpose_a, bool transpose_b) {
  const std::size_t m = transpose_a ? a.cols() : a.rows();
  const std::size_t k_a = transpose_a ? a.rows() : a.cols();
  const std::size_t k_b = transpose_b ? b.cols() : b.rows();
  const std::size_t n = transpose_b ? b.rows() : b.cols();
  if (k_a != k_b) {
    throw ShapeError("matmul inner dimension mismatch: a" + a.shape_string() + "[" +
                     flag(transpose_a) + "] x b" + b.shape_string() + "[" + flag(transpose_b) +
                     "]");
  }
  // Materialize the operands in plain orientation; transposing is exact and
  // keeps a single kernel (and a single reduction order) for all four cases.
  const Matrix lhs_t = transpose_a ? transpose(a) : Matrix{};
  const Matrix rhs_t = transpose_b ? transpose(b) : Matrix{};
  const Matrix& lhs = transpose_a ? lhs_t : a;
  const Matrix& rhs = transpose_b ? rhs_t : b;

  Matrix out(m, n);
  const double* lp = lhs.data().data();
  const double* rp = rhs.data().data();
  double* op = out.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = op + i * n;
    const double* lrow = lp + i * k_a;
    for (std::size_t k = 0; k < k_a; ++k) {
      const double s = lrow[k];
      const double* rrow = rp + k * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += s * rrow[j];
    }
  }
  return out;
}

Matrix elementwise(const Matrix& a, const Matrix& b, ElementwiseOp op) {
  const bool broadcast = !a.same_shape(b);
  if (broadcast && !(b.rows() == 1 && b.cols() == a.cols())) {
    throw ShapeError("elementwise shape mismatch: a" + a.shape_string() + " vs b" +
                     b.shape_string() + " (only 1xcols broadcast is supported)");
  }
  Matrix out(a.rows(), a.cols());
  const std::size_t cols = a.cols();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ar = a.row_span(r);
    const auto br = b.row_span(broadcast ? 0 : r);
    auto orow = out.row_span(r);
    switch (op) {
      case ElementwiseOp::add:
        for (std::size_t c = 0; c < cols; ++c) orow[c] = ar[c] + br[c];
        break;
      case ElementwiseOp::sub:
        for (std::size_t c = 0; c < cols; ++c) orow[c] = ar[c] - br[c];
        break;
      case ElementwiseOp::mul:
        for (std::size_t c = 0; c < cols; ++c) orow[c] = ar[c] * br[c];
        break;
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

Matrix scale(const Matrix& a, double factor) {
  Matrix out = a;
  for (double& v : out.data()) v *= factor;
  return out;
}

Matrix column_sums(const Matrix& a) {
  Matrix out(1, a.cols());
  auto o = out.row_span(0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row_span(r);
    for (std::size_t c = 0; c < a.cols(); ++c) o[c] += row[c];
  }
  return out;
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), a.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= a.rows()) {
      throw ShapeError("row index " + std::to_string(indices[i]) + " out of range for " +
                       a.shape_string());
    }
    const auto src = a.row_span(indices[i]);
    std::copy(src.begin(), src.end(), out.row_span(i).begin());
  }
  return out;
}

Matrix slice_cols(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols()) {
    throw ShapeError("column slice [" + std::to_string(first) + ", " +
                     std::to_string(first + count) + ") out of range for " + a.shape_string());
  }
  Matrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row_span(r).subspan(first, count);
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  return out;
}

bool all_finite(const Matrix& a) noexcept {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace mldnn
