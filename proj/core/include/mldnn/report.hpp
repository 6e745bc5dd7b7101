#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mldnn/metrics.hpp"

namespace mldnn {

enum class RowSource { computed, published };

std::string_view to_string(RowSource s) noexcept;

struct ComparisonRow {
  std::string name;
  double r2 = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  RowSource source = RowSource::computed;
};

ComparisonRow make_computed_row(std::string name, const MetricsReport& m);

/// Published reference results for other regressors on the same dataset,
/// reproduced verbatim (including XGBoost's RMSE, which is not √MSE).
const std::vector<ComparisonRow>& published_baselines();

/// Computed rows plus the published rows, stable-sorted by descending R².
/// Throws ConfigError when `computed` is empty or holds a published row.
std::vector<ComparisonRow> merge_comparison(const std::vector<ComparisonRow>& computed);
std::string render_comparison_csv(const std::vector<ComparisonRow>& merged);
void comparison_table(const std::vector<ComparisonRow>& computed, const std::filesystem::path& out_path);

/// "true,predicted" rows: actual in shortest form, prediction to 6 decimals.
std::string render_scatter_csv(const EvalPair& p);
/// Scatter of predicted against true values with a y = x reference line.
std::string render_scatter_svg(const EvalPair& p);
void regression_scatter(const EvalPair& p, const std::filesystem::path& csv_path,
                        const std::filesystem::path& svg_path);

/// The first `rows` true/predicted pairs as a small side-by-side table.
std::string render_true_vs_predicted(const EvalPair& p, std::size_t rows = 10);

inline constexpr std::size_t kDefaultHistogramBins = 25;

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins of (predicted − actual) over [min, max]; a single bin
/// when every error is identical.
std::vector<HistogramBin> error_histogram_bins(const EvalPair& p, std::size_t bins = kDefaultHistogramBins);
std::string render_histogram_csv(const std::vector<HistogramBin>& bins);
std::string render_histogram_svg(const std::vector<HistogramBin>& bins);
void error_histogram(const EvalPair& p, std::size_t bins, const std::filesystem::path& csv_path,
                     const std::filesystem::path& svg_path);

}  // namespace mldnn
