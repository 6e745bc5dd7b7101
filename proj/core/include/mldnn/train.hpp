#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mldnn/data.hpp"
#include "mldnn/graph.hpp"
#include "mldnn/metrics.hpp"

namespace mldnn {

struct TrainConfig {
  std::size_t epochs = 1000;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  /// Used when the data is split (see prepare_data); train_loop itself
  /// trains on split.train and monitors split.validation as given.
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  bool shuffle_each_epoch = true;
};

/// Throws ConfigError naming the first broken invariant.
void validate(const TrainConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_mae = 0.0;
  double train_mse = 0.0;
  std::optional<double> val_mae;  // absent when there are no validation rows
  std::optional<double> val_mse;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct History {
  std::vector<EpochRecord> records;
  double duration_seconds = 0.0;
};

/// epoch,train_mae,train_mse,val_mae,val_mse with shortest round-trip numbers;
/// missing validation values are left empty.
std::string render_history_csv(const History& h);
void write_history_csv(const History& h, const std::filesystem::path& path);

/// Mini-batch partition of positions [0, n): consecutive chunks of
/// batch_size; a trailing chunk of fewer than 2 rows joins the one before.
std::vector<std::vector<std::size_t>> make_batches(std::span<const std::size_t> order,
                                                   std::size_t batch_size);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Adam on MSE loss over split.train. Every epoch reshuffles (seeded), runs
/// all mini-batches, then records MAE/MSE of infer-mode predictions on the
/// whole fit and validation sets. Deterministic per (cfg, data, graph).
History train_loop(ModelGraph& g, const SplitDataset& data, const TrainConfig& cfg,
                   const EpochCallback& on_epoch = {});

/// Infer-mode predictions scored with all four metrics.
MetricsReport evaluate(const ModelGraph& g, const Matrix& features, const Matrix& targets);

struct GradCheckOptions {
  std::uint64_t seed = 0;               // picks sampled scalars in large tensors
  std::size_t full_tensor_limit = 500;  // tensors smaller than this are probed exhaustively
  std::size_t samples_per_tensor = 200;
  /// Runs after the analytic backward pass; lets tests corrupt gradients.
  std::function<void(ModelGraph&)> after_backward;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  bool passed = false;
  std::string worst_tensor;
  std::size_t scalars_checked = 0;
};

/// Compares analytic gradients of the MSE loss against central differences
/// (L(θ+h) − L(θ−h)) / 2h using |a − n| / max(|a|, |n|, 1e-8). A scalar
/// that fails is retried once at h/10 (ReLU kinks). BN running statistics
/// are restored afterwards, so the graph leaves in the state it came in.
GradCheckResult grad_check(ModelGraph& g, const Matrix& x, const Matrix& y, double h = 1e-5,
                           double tolerance = 1e-4, const GradCheckOptions& options = {});

}  // namespace mldnn
