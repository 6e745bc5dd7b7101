#include <gtest/gtest.h>

#include "mldnn/error.hpp"
#include "mldnn/tensor.hpp"
#include "test_support.hpp"

namespace mldnn {
namespace {

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const Matrix a = Matrix::from_rows({{1.5, -2.0}, {3.25, 4.0}});
  EXPECT_EQ(matmul(a, Matrix::identity(2)), a);
}

TEST(Matmul, HandComputedProduct) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix b = Matrix::from_rows({{5}, {6}});
  EXPECT_EQ(matmul(a, b), Matrix::from_rows({{17}, {39}}));
}

TEST(Matmul, TransposedOperandsReproduceTransposeBitwise) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix a = test::random_matrix(3, 4, seed);
    const Matrix b = test::random_matrix(4, 2, seed + 1000);
    const Matrix ab_t = transpose(matmul(a, b));
    const Matrix bt_at = matmul(b, a, true, true);
    ASSERT_EQ(ab_t, bt_at) << "seed " << seed;
  }
}

TEST(Matmul, TransposeFlagsMatchExplicitTranspose) {
  const Matrix a = test::random_matrix(5, 3, 7);
  const Matrix b = test::random_matrix(5, 4, 8);
  EXPECT_EQ(matmul(a, b, true, false), matmul(transpose(a), b));
  const Matrix c = test::random_matrix(4, 3, 9);
  EXPECT_EQ(matmul(a, c, false, true), matmul(a, transpose(c)));
}

TEST(Matmul, IdentityExactUpTo64) {
  for (std::size_t n : {1u, 7u, 33u, 64u}) {
    const Matrix a = test::random_matrix(n, n, n);
    EXPECT_EQ(matmul(a, Matrix::identity(n)), a);
  }
}

TEST(Matmul, ShapeErrorNamesShapesAndFlags) {
  const Matrix a(2, 3);
  const Matrix b(2, 3);
  try {
    matmul(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(2x3)"), std::string::npos);
    EXPECT_NE(msg.find("[N]"), std::string::npos);
  }
  EXPECT_NO_THROW(matmul(a, b, false, true));
}

TEST(Matmul, InputsAreNotMutated) {
  const Matrix a = test::random_matrix(3, 3, 1);
  const Matrix b = test::random_matrix(3, 3, 2);
  const Matrix a0 = a, b0 = b;
  (void)matmul(a, b, true, true);
  EXPECT_EQ(a, a0);
  EXPECT_EQ(b, b0);
}

TEST(Elementwise, AddZerosIsIdentity) {
  const Matrix a = test::random_matrix(4, 3, 3);
  EXPECT_EQ(add(a, Matrix(4, 3)), a);
}

TEST(Elementwise, HandValues) {
  EXPECT_EQ(add(Matrix::from_rows({{1, 2}}), Matrix::from_rows({{3, 4}})), Matrix::from_rows({{4, 6}}));
  EXPECT_EQ(mul(Matrix::from_rows({{2, 3}}), Matrix::from_rows({{4, 5}})), Matrix::from_rows({{8, 15}}));
  EXPECT_EQ(sub(Matrix::from_rows({{2, 3}}), Matrix::from_rows({{4, 5}})), Matrix::from_rows({{-2, -2}}));
}

TEST(Elementwise, AddIsCommutativeBitwise) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = test::random_matrix(5, 6, seed, -1e6, 1e6);
    const Matrix b = test::random_matrix(5, 6, seed + 50, -1e-6, 1e-6);
    EXPECT_EQ(add(a, b), add(b, a));
  }
}

TEST(Elementwise, RowBroadcast) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(add(a, Matrix::from_rows({{10, 20}})), Matrix::from_rows({{11, 22}, {13, 24}}));
}

TEST(Elementwise, OtherBroadcastsRejected) {
  const Matrix a(3, 2);
  EXPECT_THROW(add(a, Matrix(3, 1)), ShapeError);
  EXPECT_THROW(add(a, Matrix(2, 2)), ShapeError);
  EXPECT_THROW(add(Matrix(1, 2), a), ShapeError);
}

TEST(MatrixTest, ConstructorRejectsWrongDataLength) {
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(MatrixTest, SliceAndGather) {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(slice_cols(a, 1, 2), Matrix::from_rows({{2, 3}, {5, 6}}));
  const std::vector<std::size_t> idx{1, 0, 1};
  EXPECT_EQ(gather_rows(a, idx), Matrix::from_rows({{4, 5, 6}, {1, 2, 3}, {4, 5, 6}}));
  EXPECT_THROW(slice_cols(a, 2, 2), ShapeError);
}

TEST(MatrixTest, FiniteCheck) {
  Matrix a(2, 2, 1.0);
  EXPECT_TRUE(all_finite(a));
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(all_finite(a));
}

}  // namespace
}  // namespace mldnn
