#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mldnn/metrics.hpp"
#include "test_support.hpp"

namespace mldnn {
namespace {

EvalPair pair_of(std::vector<double> y, std::vector<double> yhat) {
  const std::size_t n = y.size(), m = yhat.size();
  return {Matrix(n, 1, std::move(y)), Matrix(m, 1, std::move(yhat))};
}

TEST(Metrics, PerfectPrediction) {
  const auto m = compute_metrics(pair_of({1, 2, 3}, {1, 2, 3}));
  EXPECT_EQ(m.r2, 1.0);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
}

TEST(Metrics, HandValues) {
  const auto p = pair_of({1, 2, 3}, {2, 2, 2});
  EXPECT_DOUBLE_EQ(r2(p), 0.0);
  EXPECT_DOUBLE_EQ(mae(p), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mse(p), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rmse(p), std::sqrt(2.0 / 3.0));
  EXPECT_DOUBLE_EQ(r2(pair_of({1, 2, 3}, {1.5, 2, 2.5})), 0.75);
  EXPECT_DOUBLE_EQ(r2(pair_of({0, 2}, {0.5, 1.5})), 0.75);
  EXPECT_DOUBLE_EQ(r2(pair_of({1, 3}, {2, 2})), 0.0);
  EXPECT_DOUBLE_EQ(r2(pair_of({0, 4}, {1, 3})), 0.75);
  EXPECT_DOUBLE_EQ(r2(pair_of({0, 2, 4}, {1, 2, 3})), 0.75);
  EXPECT_DOUBLE_EQ(r2(pair_of({0, 0, 2, 2}, {1, 0, 1, 2})), 0.5);
  EXPECT_DOUBLE_EQ(r2(pair_of({1, 2, 3}, {1, 2, 2})), 0.5);
}

TEST(Metrics, ConstantTargetsRejected) {
  EXPECT_THROW(r2(pair_of({2, 2}, {1, 3})), MetricError);
  EXPECT_NO_THROW(mae(pair_of({2, 2}, {1, 3})));
}

TEST(Metrics, EmptyAndMismatchedRejected) {
  EXPECT_THROW(mse(pair_of({}, {})), Error);
  EXPECT_THROW(mse(pair_of({1, 2}, {1})), Error);
}

TEST(Metrics, AgreeWithBruteForceOracle) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 50.0), noise(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 200;
    std::vector<double> y(n), yhat(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = u(gen);
      yhat[i] = y[i] + noise(gen);
    }
    const auto b = test::brute_metrics(y, yhat);
    const auto m = compute_metrics(pair_of(y, yhat));
    EXPECT_TRUE(test::rel_close(m.r2, b.r2, 1e-12));
    EXPECT_TRUE(test::rel_close(m.mae, b.mae, 1e-12));
    EXPECT_TRUE(test::rel_close(m.mse, b.mse, 1e-12));
    EXPECT_TRUE(test::rel_close(m.rmse, b.rmse, 1e-12));
  }
}

TEST(Metrics, Relations) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(30), yhat(30);
    for (int i = 0; i < 30; ++i) {
      y[i] = nd(gen) * 10;
      yhat[i] = nd(gen) * 10;
    }
    const auto m = compute_metrics(pair_of(y, yhat));
    EXPECT_LE(m.r2, 1.0);
    EXPECT_LE(m.mae, m.rmse + 1e-12);
    EXPECT_NEAR(m.rmse * m.rmse, m.mse, 1e-12 * m.mse);
  }
}

}  // namespace
}  // namespace mldnn
