#include <gtest/gtest.h>

#include "mldnn/baseline.hpp"
#include "mldnn/data.hpp"
#include "mldnn/metrics.hpp"
#include "test_support.hpp"

namespace mldnn {
namespace {

TEST(Ols, ExactLine) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const Matrix y = Matrix::from_rows({{1}, {3}, {5}, {7}});
  const LinearModel m = ols_fit(x, y);
  EXPECT_NEAR(m.intercept, 1.0, 1e-12);
  EXPECT_NEAR(m.coefficients(0, 0), 2.0, 1e-12);
  const Matrix pred = ols_predict(m, Matrix::from_rows({{10}}));
  EXPECT_NEAR(pred(0, 0), 21.0, 1e-10);
}

TEST(Ols, RecoversPlantedPlane) {
  const Matrix x = test::random_matrix(50, 3, 4);
  Matrix y(50, 1);
  for (std::size_t i = 0; i < 50; ++i) y(i, 0) = -2.0 + 0.5 * x(i, 0) - 3.0 * x(i, 1) + 4.0 * x(i, 2);
  const LinearModel m = ols_fit(x, y);
  EXPECT_NEAR(m.intercept, -2.0, 1e-10);
  EXPECT_NEAR(m.coefficients(0, 0), 0.5, 1e-10);
  EXPECT_NEAR(m.coefficients(1, 0), -3.0, 1e-10);
  EXPECT_NEAR(m.coefficients(2, 0), 4.0, 1e-10);
}

TEST(Ols, DependentColumnNamed) {
  Matrix x = test::random_matrix(20, 3, 5);
  for (std::size_t i = 0; i < 20; ++i) x(i, 2) = 2.0 * x(i, 0) - x(i, 1);
  try {
    ols_fit(x, test::random_matrix(20, 1, 6), {"a", "b", "c"});
    FAIL();
  } catch (const RankDeficientError& e) {
    EXPECT_EQ(e.column(), 2u);
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}

TEST(Ols, ConstantColumnCollidesWithIntercept) {
  Matrix x = test::random_matrix(10, 2, 5);
  for (std::size_t i = 0; i < 10; ++i) x(i, 1) = 3.0;
  EXPECT_THROW(ols_fit(x, test::random_matrix(10, 1, 6)), RankDeficientError);
}

TEST(Ols, TooFewRows) { EXPECT_THROW(ols_fit(Matrix(2, 3), Matrix(2, 1)), Error); }

TEST(Ols, ResidualsOrthogonalOnHousingData) {
  const Dataset d = load_csv(test::data_path());
  const PreparedData p = prepare_data(d, 1);
  const auto& tr = p.train_full;
  const LinearModel m = ols_fit(tr.features, tr.targets);
  const Matrix pred = ols_predict(m, tr.features);
  double norm_y = 0;
  for (double v : tr.targets.data()) norm_y += v * v;
  norm_y = std::sqrt(norm_y);
  for (std::size_t c = 0; c <= 13; ++c) {
    double dot = 0, norm_c = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double xc = c == 0 ? 1.0 : tr.features(i, c - 1);
      dot += xc * (tr.targets(i, 0) - pred(i, 0));
      norm_c += xc * xc;
    }
    EXPECT_LE(std::abs(dot) / (std::sqrt(norm_c) * norm_y), 1e-8) << "column " << c;
  }
}

TEST(Ols, HousingTestR2InPlausibleRange) {
  const Dataset d = load_csv(test::data_path());
  const PreparedData p = prepare_data(d, 1);
  const OlsResult r = ols_fit_predict(p.train_full.features, p.train_full.targets, p.split.test.features);
  const double score = r2({p.split.test.targets, r.predictions});
  EXPECT_GT(score, 0.55);
  EXPECT_LT(score, 0.85);
}

}  // namespace
}  // namespace mldnn
