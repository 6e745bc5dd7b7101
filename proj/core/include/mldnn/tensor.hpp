#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mldnn {

/// Dense row-major matrix of doubles. Rows are batch samples, columns are
/// features. A 0-row matrix is allowed (empty partitions), a 0-column one is
/// not produced by any public operation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);
  /// Single row vector 1×n.
  static Matrix row(std::span<const double> values);
  /// Single column vector n×1.
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row_span(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row_span(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::string shape_string() const;
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  /// Bitwise equality of shape and contents.
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class ElementwiseOp { add, sub, mul };

/// Product op(a)·op(b). Each output element is reduced over the inner
/// dimension strictly left to right, so results are bitwise reproducible and
/// matmul(a, b)ᵀ == matmul(b, a, true, true) exactly.
Matrix matmul(const Matrix& a, const Matrix& b, bool transpose_a = false,
              bool transpose_b = false);

/// a ∘ b for equal shapes, or with b a 1×cols row broadcast over a's rows.
Matrix elementwise(const Matrix& a, const Matrix& b, ElementwiseOp op);

inline Matrix add(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::add); }
inline Matrix sub(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::sub); }
inline Matrix mul(const Matrix& a, const Matrix& b) { return elementwise(a, b, ElementwiseOp::mul); }

Matrix transpose(const Matrix& a);
Matrix scale(const Matrix& a, double factor);
/// 1×cols vector of column sums, each reduced top to bottom.
Matrix column_sums(const Matrix& a);
/// Rows of `a` picked by index, in the given order.
Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices);
/// Columns [first, first + count) of `a`.
Matrix slice_cols(const Matrix& a, std::size_t first, std::size_t count);
bool all_finite(const Matrix& a) noexcept;

}  // namespace mldnn
