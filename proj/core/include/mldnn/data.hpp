#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mldnn/tensor.hpp"

namespace mldnn {

/// Feature columns in canonical order; MEDV is the target.
inline constexpr std::array<std::string_view, 13> kFeatureNames{
    "CRIM", "ZN", "INDUS", "CHAS", "NOX", "RM", "AGE", "DIS", "RAD", "TAX", "PTRATIO", "B", "LSTAT"};
inline constexpr std::string_view kTargetName = "MEDV";
inline constexpr std::size_t kDefaultTrainRows = 405;
inline constexpr double kDefaultSigmaFloor = 1e-12;

struct Dataset {
  Matrix features;  // n × 13
  Matrix targets;   // n × 1, MEDV in $1000s
  std::vector<std::size_t> row_ids;

  std::size_t size() const noexcept { return row_ids.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Reads a housing CSV whose header names the 13 features and MEDV in any
/// order. Errors name the missing column, or the row and column of a bad
/// cell. CHAS must be 0 or 1.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_dataset(std::string_view csv_text);
/// Canonical column order, shortest round-trip number formatting.
void write_csv(const Dataset& d, const std::filesystem::path& path);
std::string render_dataset(const Dataset& d);

/// Rows at the given positions (not row ids), in that order.
Dataset subset(const Dataset& d, std::span<const std::size_t> positions);
/// a followed by b.
Dataset concat_rows(const Dataset& a, const Dataset& b);
/// Same rows with features replaced.
Dataset with_features(const Dataset& d, Matrix features);

/// Seeded Fisher–Yates shuffle of all rows; the first n_train go to train.
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, std::uint64_t seed,
                                             std::size_t n_train = kDefaultTrainRows);

/// Holds out the final ⌊fraction·n⌋ rows, keeping the current order.
std::pair<Dataset, Dataset> validation_split(const Dataset& train, double fraction = 0.2);

/// Per-column z-score statistics with population σ. Columns whose σ falls
/// below the floor get σ = 1, so they map to 0.
struct Normalizer {
  Matrix mu;
  Matrix sigma;
  double sigma_floor = kDefaultSigmaFloor;
};

Normalizer fit_normalizer(const Matrix& train_features, double sigma_floor = kDefaultSigmaFloor);
Matrix transform(const Normalizer& nz, const Matrix& x);

struct SplitDataset {
  Dataset train;
  Dataset validation;
  Dataset test;
  std::uint64_t seed = 0;
};

struct PreparedData {
  SplitDataset split;  // normalized features
  Normalizer normalizer;
  /// train followed by validation, normalized (the full training partition).
  Dataset train_full;
};

/// Split, hold out validation rows, fit the normalizer on the full training
/// partition (train + validation, never test) and normalize every part.
PreparedData prepare_data(const Dataset& d, std::uint64_t seed, std::size_t n_train = kDefaultTrainRows,
                          double validation_fraction = 0.2);

/// "fnv1a64:<16 hex digits>" over the raw bytes.
std::string checksum(std::string_view bytes);

}  // namespace mldnn
