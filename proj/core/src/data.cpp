#include "mldnn/data.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "mldnn/csv.hpp"
#include "mldnn/error.hpp"
#include "mldnn/rng.hpp"

namespace mldnn {

Dataset parse_dataset(std::string_view csv_text) {
  const CsvTable table = parse_csv(csv_text);

  std::array<std::size_t, 14> cols{};
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    cols[i] = table.column(kFeatureNames[i]);
    if (cols[i] == std::string_view::npos)
      throw ParseError("missing column '" + std::string(kFeatureNames[i]) + "' in header");
  }
  cols[13] = table.column(kTargetName);
  if (cols[13] == std::string_view::npos)
    throw ParseError("missing column '" + std::string(kTargetName) + "' in header");

  const std::size_t n = table.rows.size();
  Dataset d;
  d.features = Matrix(n, kFeatureNames.size());
  d.targets = Matrix(n, 1);
  d.row_ids.resize(n);
  std::iota(d.row_ids.begin(), d.row_ids.end(), std::size_t{0});

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string_view name = c < 13 ? kFeatureNames[c] : kTargetName;
      double v = 0.0;
      try {
        v = parse_number(row[cols[c]], line, name);
      } catch (const ParseError& e) {
        throw ParseError("row " + std::to_string(r + 1) + " (" + e.what() + ")");
      }
      if (c < 13) {
        d.features(r, c) = v;
      } else {
        d.targets(r, 0) = v;
      }
    }
    const double chas = d.features(r, 3);
    if (chas != 0.0 && chas != 1.0) {
      throw ParseError("row " + std::to_string(r + 1) + " (line " + std::to_string(line) +
                       ", column CHAS): value must be 0 or 1");
    }
  }
  return d;
}

Dataset load_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_dataset(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string render_dataset(const Dataset& d) {
  std::string out;
  for (auto name : kFeatureNames) {
    out += name;
    out += ',';
  }
  out += kTargetName;
  out += '\n';
  for (std::size_t r = 0; r < d.size(); ++r) {
    for (std::size_t c = 0; c < d.features.cols(); ++c) {
      out += format_shortest(d.features(r, c));
      out += ',';
    }
    out += format_shortest(d.targets(r, 0));
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  write_file(path, render_dataset(d));
}

Dataset subset(const Dataset& d, std::span<const std::size_t> positions) {
  Dataset out;
  out.features = gather_rows(d.features, positions);
  out.targets = gather_rows(d.targets, positions);
  out.row_ids.reserve(positions.size());
  for (std::size_t p : positions) out.row_ids.push_back(d.row_ids.at(p));
  return out;
}

Dataset concat_rows(const Dataset& a, const Dataset& b) {
  std::vector<std::size_t> ia(a.size()), ib(b.size());
  std::iota(ia.begin(), ia.end(), std::size_t{0});
  std::iota(ib.begin(), ib.end(), std::size_t{0});
  Dataset out = subset(a, ia);
  const Dataset tail = subset(b, ib);
  if (a.features.cols() != b.features.cols())
    throw ShapeError("cannot stack datasets with different feature widths");
  std::vector<double> f(out.features.data().begin(), out.features.data().end());
  f.insert(f.end(), tail.features.data().begin(), tail.features.data().end());
  std::vector<double> t(out.targets.data().begin(), out.targets.data().end());
  t.insert(t.end(), tail.targets.data().begin(), tail.targets.data().end());
  const std::size_t n = a.size() + b.size();
  out.features = Matrix(n, a.features.cols(), std::move(f));
  out.targets = Matrix(n, 1, std::move(t));
  out.row_ids.insert(out.row_ids.end(), tail.row_ids.begin(), tail.row_ids.end());
  return out;
}

Dataset with_features(const Dataset& d, Matrix features) {
  if (features.rows() != d.size()) throw ShapeError("replacement features have the wrong row count");
  Dataset out = d;
  out.features = std::move(features);
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, std::uint64_t seed, std::size_t n_train) {
  if (n_train >= d.size()) {
    throw ConfigError("train size " + std::to_string(n_train) + " must be smaller than the " +
                      std::to_string(d.size()) + " available rows");
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 2));
  rng.shuffle(std::span<std::size_t>(order));
  const std::span<const std::size_t> all(order);
  return {subset(d, all.first(n_train)), subset(d, all.subspan(n_train))};
}

std::pair<Dataset, Dataset> validation_split(const Dataset& train, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw ConfigError("validation fraction must lie in [0, 1)");
  const auto n_val = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(train.size())));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::span<const std::size_t> all(order);
  const std::size_t n_fit = train.size() - n_val;
  return {subset(train, all.first(n_fit)), subset(train, all.subspan(n_fit))};
}

Normalizer fit_normalizer(const Matrix& x, double sigma_floor) {
  if (x.rows() < 2)
    throw ShapeError("normalizer needs at least 2 rows, got " + std::to_string(x.rows()));
  if (!(sigma_floor > 0.0)) throw ConfigError("sigma floor must be positive");
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  Normalizer nz;
  nz.sigma_floor = sigma_floor;
  nz.mu = scale(column_sums(x), inv_n);
  nz.sigma = Matrix(1, x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double diff = x(r, c) - nz.mu(0, c);
      nz.sigma(0, c) += diff * diff;
    }
  for (double& s : nz.sigma.data()) {
    s = std::sqrt(s * inv_n);
    if (s < sigma_floor) s = 1.0;
  }
  return nz;
}

Matrix transform(const Normalizer& nz, const Matrix& x) {
  if (x.cols() != nz.mu.cols()) {
    throw ShapeError("normalizer fitted on " + std::to_string(nz.mu.cols()) +
                     " columns cannot transform " + x.shape_string());
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - nz.mu(0, c)) / nz.sigma(0, c);
  return out;
}

PreparedData prepare_data(const Dataset& d, std::uint64_t seed, std::size_t n_train,
                          double validation_fraction) {
  auto [train_raw, test_raw] = train_test_split(d, seed, n_train);
  auto [fit_raw, val_raw] = validation_split(train_raw, validation_fraction);

  PreparedData p;
  p.normalizer = fit_normalizer(train_raw.features);
  p.split.seed = seed;
  p.split.train = with_features(fit_raw, transform(p.normalizer, fit_raw.features));
  p.split.validation = with_features(val_raw, transform(p.normalizer, val_raw.features));
  p.split.test = with_features(test_raw, transform(p.normalizer, test_raw.features));
  p.train_full = with_features(train_raw, transform(p.normalizer, train_raw.features));
  return p;
}

std::string checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

}  // namespace mldnn
