#include "mldnn/report.hpp"

#include <algorithm>
#include <cmath>

#include "mldnn/csv.hpp"
#include "mldnn/error.hpp"

namespace mldnn {

std::string_view to_string(RowSource s) noexcept {
  return s == RowSource::computed ? "computed" : "published";
}

ComparisonRow make_computed_row(std::string name, const MetricsReport& m) {
  return {std::move(name), m.r2, m.mse, m.rmse, m.mae, RowSource::computed};
}

const std::vector<ComparisonRow>& published_baselines() {
  static const std::vector<ComparisonRow> rows{
      {"ANN", 0.87, 10.18, 3.19, 2.10, RowSource::published},
      {"XGBoost", 0.84, 15.71, 2.45, 2.45, RowSource::published},
      {"Random Forest", 0.83, 17.44, 4.17, 2.56, RowSource::published},
      {"Linear Regression", 0.71, 30.05, 5.48, 3.85, RowSource::published},
      {"SVM", 0.59, 42.81, 6.54, 3.75, RowSource::published},
  };
  return rows;
}

std::vector<ComparisonRow> merge_comparison(const std::vector<ComparisonRow>& computed) {
  if (computed.empty()) throw ConfigError("comparison table needs at least one computed row");
  for (const auto& r : computed)
    if (r.source != RowSource::computed)
      throw ConfigError("row '" + r.name + "' passed as computed but marked published");
  std::vector<ComparisonRow> merged = computed;
  const auto& pub = published_baselines();
  merged.insert(merged.end(), pub.begin(), pub.end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.r2 > b.r2; });
  return merged;
}

std::string render_comparison_csv(const std::vector<ComparisonRow>& merged) {
  std::string out = "name,r2,mse,rmse,mae,source\n";
  for (const auto& r : merged) {
    out += r.name + "," + format_shortest(r.r2) + "," + format_shortest(r.mse) + "," +
           format_shortest(r.rmse) + "," + format_shortest(r.mae) + "," +
           std::string(to_string(r.source)) + "\n";
  }
  out +=
      "# published rows are reproduced verbatim. Note: XGBoost lists MSE 15.71 with RMSE 2.45,\n"
      "# but sqrt(15.71) = 3.96; the published pair is inconsistent and is left uncorrected.\n";
  return out;
}

void comparison_table(const std::vector<ComparisonRow>& computed, const std::filesystem::path& out_path) {
  write_file(out_path, render_comparison_csv(merge_comparison(computed)));
}

std::string render_scatter_csv(const EvalPair& p) {
  if (!p.actual.same_shape(p.predicted) || p.actual.cols() != 1 || p.actual.rows() == 0)
    throw ShapeError("scatter needs matching non-empty Nx1 inputs");
  std::string out = "true,predicted\n";
  for (std::size_t i = 0; i < p.actual.rows(); ++i)
    out += format_shortest(p.actual(i, 0)) + "," + format_fixed(p.predicted(i, 0), 6) + "\n";
  return out;
}

std::string render_true_vs_predicted(const EvalPair& p, std::size_t rows) {
  if (!p.actual.same_shape(p.predicted) || p.actual.cols() != 1)
    throw ShapeError("true/predicted table needs matching Nx1 inputs");
  std::string out = "true_value,predicted_value\n";
  for (std::size_t i = 0; i < std::min(rows, p.actual.rows()); ++i)
    out += format_shortest(p.actual(i, 0)) + "," + format_fixed(p.predicted(i, 0), 6) + "\n";
  return out;
}

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;
constexpr double kPlot = kWidth - 2 * kMargin;

std::string num(double v) { return format_fixed(v, 3); }

std::string svg_open() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const std::string& extra = {}) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\"" + extra + ">" + s +
         "</text>\n";
}

std::string axes(const std::string& xlabel, const std::string& ylabel) {
  const double x0 = kMargin;
  const double y0 = kMargin + kPlot;
  std::string out;
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0 + kPlot) + "\" y2=\"" +
         num(y0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(kMargin) + "\" stroke=\"black\"/>\n";
  out += text(x0 + kPlot / 2, kHeight - 20, xlabel);
  out += text(20, kMargin + kPlot / 2, ylabel,
              " transform=\"rotate(-90 20 " + num(kMargin + kPlot / 2) + ")\"");
  return out;
}

}  // namespace

std::string render_scatter_svg(const EvalPair& p) {
  if (!p.actual.same_shape(p.predicted) || p.actual.cols() != 1 || p.actual.rows() == 0)
    throw ShapeError("scatter needs matching non-empty Nx1 inputs");
  double lo = p.actual(0, 0);
  double hi = lo;
  for (std::size_t i = 0; i < p.actual.rows(); ++i) {
    lo = std::min({lo, p.actual(i, 0), p.predicted(i, 0)});
    hi = std::max({hi, p.actual(i, 0), p.predicted(i, 0)});
  }
  if (hi == lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double s = kPlot / (hi - lo);
  auto px = [&](double v) { return kMargin + (v - lo) * s; };
  auto py = [&](double v) { return kMargin + kPlot - (v - lo) * s; };

  std::string out = svg_open();
  out += axes("True value ($1000s)", "Predicted value ($1000s)");
  out += "<line class=\"diagonal\" x1=\"" + num(px(lo)) + "\" y1=\"" + num(py(lo)) + "\" x2=\"" +
         num(px(hi)) + "\" y2=\"" + num(py(hi)) + "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  out += text(px(lo), py(lo) + 16, format_fixed(lo, 1));
  out += text(px(hi), py(lo) + 16, format_fixed(hi, 1));
  for (std::size_t i = 0; i < p.actual.rows(); ++i) {
    out += "<circle cx=\"" + num(px(p.actual(i, 0))) + "\" cy=\"" + num(py(p.predicted(i, 0))) +
           "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void regression_scatter(const EvalPair& p, const std::filesystem::path& csv_path,
                        const std::filesystem::path& svg_path) {
  write_file(csv_path, render_scatter_csv(p));
  write_file(svg_path, render_scatter_svg(p));
}

std::vector<HistogramBin> error_histogram_bins(const EvalPair& p, std::size_t bins) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  if (!p.actual.same_shape(p.predicted) || p.actual.cols() != 1 || p.actual.rows() == 0)
    throw ShapeError("histogram needs matching non-empty Nx1 inputs");
  const std::size_t n = p.actual.rows();
  std::vector<double> errors(n);
  for (std::size_t i = 0; i < n; ++i) errors[i] = p.predicted(i, 0) - p.actual(i, 0);
  const auto [mn, mx] = std::minmax_element(errors.begin(), errors.end());
  const double lo = *mn;
  const double hi = *mx;
  if (lo == hi) return {{lo, hi, n}};

  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].low = lo + static_cast<double>(b) * width;
    out[b].high = b + 1 == bins ? hi : lo + static_cast<double>(b + 1) * width;
  }
  for (double e : errors) {
    auto idx = static_cast<std::size_t>(std::floor((e - lo) / width));
    out[std::min(idx, bins - 1)].count += 1;
  }
  return out;
}

std::string render_histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "# error = predicted - actual ($1000s)\nbin_low,bin_high,count\n";
  for (const auto& b : bins)
    out += format_shortest(b.low) + "," + format_shortest(b.high) + "," + std::to_string(b.count) + "\n";
  return out;
}

std::string render_histogram_svg(const std::vector<HistogramBin>& bins) {
  std::size_t peak = 1;
  for (const auto& b : bins) peak = std::max(peak, b.count);
  const double bar_w = kPlot / static_cast<double>(bins.size());
  std::string out = svg_open();
  out += axes("Prediction error, predicted - true ($1000s)", "Count");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double h = kPlot * static_cast<double>(bins[i].count) / static_cast<double>(peak);
    out += "<rect x=\"" + num(kMargin + static_cast<double>(i) * bar_w) + "\" y=\"" +
           num(kMargin + kPlot - h) + "\" width=\"" + num(bar_w) + "\" height=\"" + num(h) +
           "\" fill=\"steelblue\" stroke=\"white\"/>\n";
  }
  if (!bins.empty()) {
    out += text(kMargin, kMargin + kPlot + 16, format_fixed(bins.front().low, 2));
    out += text(kMargin + kPlot, kMargin + kPlot + 16, format_fixed(bins.back().high, 2));
  }
  out += text(kMargin - 12, kMargin + 4, std::to_string(peak));
  out += "</svg>\n";
  return out;
}

void error_histogram(const EvalPair& p, std::size_t bins, const std::filesystem::path& csv_path,
                     const std::filesystem::path& svg_path) {
  const auto h = error_histogram_bins(p, bins);
  write_file(csv_path, render_histogram_csv(h));
  write_file(svg_path, render_histogram_svg(h));
}

}  // namespace mldnn
