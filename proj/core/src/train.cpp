#include "mldnn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mldnn/csv.hpp"
#include "mldnn/error.hpp"
#include "mldnn/layers.hpp"
#include "mldnn/optim.hpp"
#include "mldnn/rng.hpp"

namespace mldnn {

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (cfg.batch_size < 2) throw ConfigError("batch size must be at least 2 (batch norm needs a variance)");
  if (!(cfg.validation_fraction >= 0.0 && cfg.validation_fraction < 1.0))
    throw ConfigError("validation fraction must lie in [0, 1)");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

std::string render_history_csv(const History& h) {
  std::string out = "epoch,train_mae,train_mse,val_mae,val_mse\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_shortest(*v) : std::string{}; };
  for (const auto& r : h.records) {
    out += std::to_string(r.epoch) + "," + format_shortest(r.train_mae) + "," +
           format_shortest(r.train_mse) + "," + opt(r.val_mae) + "," + opt(r.val_mse) + "\n";
  }
  return out;
}

void write_history_csv(const History& h, const std::filesystem::path& path) {
  write_file(path, render_history_csv(h));
}

std::vector<std::vector<std::size_t>> make_batches(std::span<const std::size_t> order,
                                                   std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t len = std::min(batch_size, order.size() - start);
    auto chunk = order.subspan(start, len);
    if (len < 2 && !batches.empty()) {
      batches.back().insert(batches.back().end(), chunk.begin(), chunk.end());
    } else {
      batches.emplace_back(chunk.begin(), chunk.end());
    }
  }
  return batches;
}

namespace {

std::pair<double, double> mae_mse(const ModelGraph& g, const Dataset& d) {
  const EvalPair p{d.targets, predict(g, d.features)};
  return {mae(p), mse(p)};
}

}  // namespace

History train_loop(ModelGraph& g, const SplitDataset& data, const TrainConfig& cfg,
                   const EpochCallback& on_epoch) {
  validate(cfg);
  const Dataset& fit = data.train;
  if (fit.features.cols() != g.input_width()) {
    throw ShapeError("training features " + fit.features.shape_string() + " do not match graph input width " +
                     std::to_string(g.input_width()));
  }
  if (fit.size() < 2) throw ConfigError("training needs at least 2 fit rows");

  AdamHyper hyper;
  hyper.learning_rate = cfg.learning_rate;
  AdamState adam = adam_init(g, hyper);
  Rng rng(derive_seed(cfg.seed, 3));

  std::vector<std::size_t> order(fit.size());
  History history;
  history.records.reserve(cfg.epochs);
  const auto started = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.shuffle_each_epoch) rng.shuffle(std::span<std::size_t>(order));

    for (const auto& batch : make_batches(order, cfg.batch_size)) {
      const Matrix x = gather_rows(fit.features, batch);
      const Matrix y = gather_rows(fit.targets, batch);
      const Matrix pred = forward(g, x, Mode::train);
      const LossResult loss = mse_loss(pred, y);
      if (!std::isfinite(loss.loss))
        throw StateError("non-finite training loss at epoch " + std::to_string(epoch));
      backward(g, loss.grad);
      adam_step(g, adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    std::tie(rec.train_mae, rec.train_mse) = mae_mse(g, fit);
    if (data.validation.size() > 0) {
      const auto [vmae, vmse] = mae_mse(g, data.validation);
      rec.val_mae = vmae;
      rec.val_mse = vmse;
    }
    history.records.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  history.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return history;
}

MetricsReport evaluate(const ModelGraph& g, const Matrix& features, const Matrix& targets) {
  const Matrix pred = predict(g, features);
  return compute_metrics({targets, pred});
}

GradCheckResult grad_check(ModelGraph& g, const Matrix& x, const Matrix& y, double h, double tolerance,
                           const GradCheckOptions& options) {
  const auto saved_state = g.state_tensors();
  auto loss_at = [&] { return mse_loss(forward(g, x, Mode::train), y).loss; };

  {
    const LossResult l = mse_loss(forward(g, x, Mode::train), y);
    backward(g, l.grad);
  }
  if (options.after_backward) options.after_backward(g);

  auto params = g.trainable_parameters();
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(*p.grad);

  Rng rng(derive_seed(options.seed, 4));
  GradCheckResult result;

  auto numeric = [&](double& slot, double step) {
    const double orig = slot;
    slot = orig + step;
    const double lp = loss_at();
    slot = orig - step;
    const double lm = loss_at();
    slot = orig;
    return (lp - lm) / (2.0 * step);
  };
  auto rel_error = [](double a, double n) {
    return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
  };

  for (std::size_t t = 0; t < params.size(); ++t) {
    auto values = params[t].value->data();
    const auto grads = analytic[t].data();

    std::vector<std::size_t> picks(values.size());
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (values.size() >= options.full_tensor_limit && options.samples_per_tensor < values.size()) {
      // partial Fisher–Yates: the first k entries become a uniform sample
      for (std::size_t i = 0; i < options.samples_per_tensor; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(picks.size() - i));
        std::swap(picks[i], picks[j]);
      }
      picks.resize(options.samples_per_tensor);
    }

    for (std::size_t k : picks) {
      double err = rel_error(grads[k], numeric(values[k], h));
      if (err > tolerance) err = rel_error(grads[k], numeric(values[k], h / 10.0));
      ++result.scalars_checked;
      if (err > result.max_relative_error || result.worst_tensor.empty()) {
        result.max_relative_error = err;
        result.worst_tensor = params[t].name;
      }
    }
  }

  for (const auto& t : saved_state) g.set_state_tensor(t.name, t.value);
  result.passed = result.max_relative_error <= tolerance;
  return result;
}

}  // namespace mldnn
