#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "mldnn/csv.hpp"
#include "mldnn/error.hpp"
#include "mldnn/report.hpp"
#include "test_support.hpp"

namespace mldnn {
namespace {

EvalPair sample_pair(std::size_t n, std::uint64_t seed) {
  EvalPair p{test::random_matrix(n, 1, seed, 5, 50), Matrix(n, 1)};
  const Matrix noise = test::random_matrix(n, 1, seed + 1, -3, 3);
  for (std::size_t i = 0; i < n; ++i) p.predicted(i, 0) = p.actual(i, 0) + noise(i, 0);
  return p;
}

TEST(Comparison, PublishedRowsVerbatim) {
  const auto& rows = published_baselines();
  ASSERT_EQ(rows.size(), 5u);
  const std::vector<std::string> names{"ANN", "XGBoost", "Random Forest", "Linear Regression", "SVM"};
  const double r2s[] = {0.87, 0.84, 0.83, 0.71, 0.59};
  const double mses[] = {10.18, 15.71, 17.44, 30.05, 42.81};
  const double rmses[] = {3.19, 2.45, 4.17, 5.48, 6.54};
  const double maes[] = {2.10, 2.45, 2.56, 3.85, 3.75};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(rows[i].name, names[i]);
    EXPECT_EQ(rows[i].r2, r2s[i]);
    EXPECT_EQ(rows[i].mse, mses[i]);
    EXPECT_EQ(rows[i].rmse, rmses[i]);
    EXPECT_EQ(rows[i].mae, maes[i]);
    EXPECT_EQ(rows[i].source, RowSource::published);
  }
}

TEST(Comparison, MergeSortsByR2Stably) {
  const auto merged = merge_comparison({make_computed_row("Mine", {0.84, 1, 1, 1})});
  ASSERT_EQ(merged.size(), 6u);
  // computed rows precede published ones, so ties keep them first
  EXPECT_EQ(merged[0].name, "ANN");
  EXPECT_EQ(merged[1].name, "Mine");
  EXPECT_EQ(merged[2].name, "XGBoost");
  for (std::size_t i = 1; i < merged.size(); ++i) EXPECT_GE(merged[i - 1].r2, merged[i].r2);
}

TEST(Comparison, MergeRejectsBadInput) {
  EXPECT_THROW(merge_comparison({}), ConfigError);
  EXPECT_THROW(merge_comparison({published_baselines()[0]}), ConfigError);
}

TEST(Comparison, CsvCarriesSourceAndFootnote) {
  const std::string csv = render_comparison_csv(merge_comparison({make_computed_row("Mine", {0.8, 2.5, 14, 3.74})}));
  EXPECT_EQ(csv.rfind("name,r2,mse,rmse,mae,source\n", 0), 0u);
  EXPECT_NE(csv.find("XGBoost,0.84,15.71,2.45,2.45,published"), std::string::npos);
  EXPECT_NE(csv.find("Mine,0.8,14,3.74,2.5,computed"), std::string::npos);
  EXPECT_NE(csv.find("\n#"), std::string::npos);
}

TEST(Scatter, CsvOneRowPerPoint) {
  const EvalPair p = sample_pair(101, 1);
  const std::string csv = render_scatter_csv(p);
  const CsvTable t = parse_csv(csv);
  EXPECT_EQ(t.header, (std::vector<std::string>{"true", "predicted"}));
  ASSERT_EQ(t.rows.size(), 101u);
  EXPECT_EQ(parse_number(t.rows[7][0], 8, "x"), p.actual(7, 0));
  EXPECT_NEAR(parse_number(t.rows[7][1], 8, "x"), p.predicted(7, 0), 5e-7);
}

TEST(Scatter, SvgWellFormedWithDiagonal) {
  const std::string svg = render_scatter_svg(sample_pair(101, 2));
  EXPECT_TRUE(test::well_formed_svg(svg));
  EXPECT_NE(svg.find("class=\"diagonal\""), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t i = 0; (i = svg.find("<circle", i)) != std::string::npos; ++i) ++circles;
  EXPECT_EQ(circles, 101u);
}

TEST(Histogram, CountsSumToN) {
  const EvalPair p = sample_pair(101, 3);
  const auto bins = error_histogram_bins(p);
  ASSERT_EQ(bins.size(), 25u);
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  EXPECT_EQ(total, 101u);
  for (std::size_t i = 1; i < bins.size(); ++i) EXPECT_DOUBLE_EQ(bins[i - 1].high, bins[i].low);
}

TEST(Histogram, ExtremesLandInEndBins) {
  EvalPair p{Matrix::from_rows({{0}, {0}, {0}}), Matrix::from_rows({{-1}, {0}, {1}})};
  const auto bins = error_histogram_bins(p, 4);
  EXPECT_EQ(bins.front().count, 1u);
  EXPECT_EQ(bins.back().count, 1u);
  EXPECT_EQ(bins.front().low, -1.0);
  EXPECT_EQ(bins.back().high, 1.0);
}

TEST(Histogram, IdenticalErrorsGiveOneBin) {
  EvalPair p{Matrix::from_rows({{1}, {2}}), Matrix::from_rows({{2}, {3}})};
  const auto bins = error_histogram_bins(p);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_EQ(bins[0].count, 2u);
}

TEST(Histogram, CsvAndSvg) {
  const auto bins = error_histogram_bins(sample_pair(50, 4), 10);
  const std::string csv = render_histogram_csv(bins);
  EXPECT_EQ(csv.rfind("#", 0), 0u);
  EXPECT_EQ(parse_csv(csv).rows.size(), 10u);
  EXPECT_TRUE(test::well_formed_svg(render_histogram_svg(bins)));
  EXPECT_THROW(error_histogram_bins(sample_pair(5, 1), 0), Error);
}

TEST(TrueVsPredicted, FirstTenRows) {
  const std::string csv = render_true_vs_predicted(sample_pair(30, 5));
  const CsvTable t = parse_csv(csv);
  EXPECT_EQ(t.header, (std::vector<std::string>{"true_value", "predicted_value"}));
  EXPECT_EQ(t.rows.size(), 10u);
}

}  // namespace
}  // namespace mldnn
