#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "mldnn/baseline.hpp"
#include "mldnn/checkpoint.hpp"
#include "mldnn/csv.hpp"
#include "mldnn/data.hpp"
#include "mldnn/graph.hpp"
#include "mldnn/modelspec.hpp"
#include "mldnn/optim.hpp"
#include "mldnn/report.hpp"
#include "mldnn/rng.hpp"
#include "mldnn/train.hpp"

namespace fs = std::filesystem;

namespace mldnn::cli {

namespace {

constexpr const char* kCheckpointFile = "model.ckpt";
constexpr const char* kHistoryFile = "history.csv";
constexpr const char* kManifestFile = "manifest.txt";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct TrainOptions {
  std::string data;
  std::string spec;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::optional<double> validation;
  std::optional<std::size_t> n_train;
  bool quiet = false;
};

struct EvalOptions {
  std::string checkpoint;
  std::string data;
  std::string report_dir;
  std::size_t bins = kDefaultHistogramBins;
};

struct CompareOptions {
  std::string checkpoint;
  std::string data;
  std::string out;
};

struct GradcheckOptions {
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::size_t rows = 4;
  double h = 1e-5;
  double tolerance = 1e-4;
};

// Resolved settings of a training run; exactly what the manifest freezes.
struct RunSettings {
  std::string data;
  std::string spec;
  std::uint64_t seed = 0;
  TrainConfig train;
  std::size_t n_train = kDefaultTrainRows;
};

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) throw ParseError("config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("config key '" + key + "': expected true or false, got '" + text + "'");
}

std::uint64_t env_seed_or(std::uint64_t fallback) {
  const char* env = std::getenv("MLDNN_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  return parse_value<std::uint64_t>("MLDNN_SEED", env);
}

// Keys a manifest carries that are outputs of a run rather than inputs.
bool is_informational_key(const std::string& key) {
  static const std::vector<std::string> keys{
      "dataset_checksum", "checkpoint", "history", "manifest", "created_at", "duration_seconds",
      "adam_beta1", "adam_beta2", "adam_epsilon", "train_r2", "train_mae", "train_mse", "train_rmse",
      "test_r2", "test_mae", "test_mse", "test_rmse"};
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

RunSettings resolve_settings(const TrainOptions& o, std::ostream& err) {
  RunSettings s;
  bool seed_from_config = false;
  std::optional<std::string> expected_checksum;

  if (!o.config.empty()) {
    const auto cfg = KeyValueFile::load(o.config);
    for (const auto& [k, v] : cfg.entries()) {
      if (k == "data") s.data = v;
      else if (k == "spec") s.spec = v;
      else if (k == "seed") { s.seed = parse_value<std::uint64_t>(k, v); seed_from_config = true; }
      else if (k == "epochs") s.train.epochs = parse_value<std::size_t>(k, v);
      else if (k == "batch_size") s.train.batch_size = parse_value<std::size_t>(k, v);
      else if (k == "learning_rate") s.train.learning_rate = parse_value<double>(k, v);
      else if (k == "validation_fraction") s.train.validation_fraction = parse_value<double>(k, v);
      else if (k == "n_train") s.n_train = parse_value<std::size_t>(k, v);
      else if (k == "shuffle_each_epoch") s.train.shuffle_each_epoch = parse_bool(k, v);
      else if (k == "dataset_checksum") expected_checksum = v;
      else if (!is_informational_key(k)) throw ConfigError("unknown config key '" + k + "'");
    }
  }
  if (!o.data.empty()) s.data = o.data;
  if (!o.spec.empty()) s.spec = o.spec;
  if (o.seed) s.seed = *o.seed;
  else if (!seed_from_config) s.seed = env_seed_or(0);
  if (o.epochs) s.train.epochs = *o.epochs;
  if (o.batch_size) s.train.batch_size = *o.batch_size;
  if (o.lr) s.train.learning_rate = *o.lr;
  if (o.validation) s.train.validation_fraction = *o.validation;
  if (o.n_train) s.n_train = *o.n_train;
  s.train.seed = s.seed;

  if (s.data.empty()) throw UsageError("train: --data is required (or a config file with data=...)");
  if (expected_checksum && o.data.empty()) {
    const std::string actual = checksum(read_file(s.data));
    if (actual != *expected_checksum) {
      err << "warning: dataset checksum " << actual << " differs from the manifest's "
          << *expected_checksum << "\n";
    }
  }
  validate(s.train);
  return s;
}

ArchitectureSpec load_architecture(const std::string& spec_path) {
  return spec_path.empty() ? default_architecture() : parse_spec(read_file(spec_path));
}

void print_report(std::ostream& out, const std::string& label, const MetricsReport& m) {
  out << std::left << std::setw(6) << label << std::right << std::fixed << std::setprecision(4)
      << " R2=" << m.r2 << "  MAE=" << m.mae << "  MSE=" << m.mse << "  RMSE=" << m.rmse << "\n";
  out.unsetf(std::ios::floatfield);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const RunSettings s = resolve_settings(o, err);
  const std::string data_bytes = read_file(s.data);
  const Dataset dataset = parse_dataset(data_bytes);
  const ArchitectureSpec arch = load_architecture(s.spec);

  const PreparedData prepared = prepare_data(dataset, s.seed, s.n_train, s.train.validation_fraction);
  ModelGraph graph = build_from_spec(arch, s.seed);

  const auto census = param_count(graph);
  out << "training: " << prepared.split.train.size() << " fit rows, " << prepared.split.validation.size()
      << " validation rows, " << prepared.split.test.size() << " test rows; " << census.trainable
      << " trainable parameters; seed " << s.seed << "\n";

  const std::size_t every = std::max<std::size_t>(1, s.train.epochs / 10);
  const History history = train_loop(graph, prepared.split, s.train, [&](const EpochRecord& r) {
    if (o.quiet || (r.epoch % every != 0 && r.epoch != 1)) return;
    out << "epoch " << r.epoch << ": train_mse=" << format_fixed(r.train_mse, 4);
    if (r.val_mse) out << " val_mse=" << format_fixed(*r.val_mse, 4);
    out << "\n";
  });

  const MetricsReport train_m =
      evaluate(graph, prepared.train_full.features, prepared.train_full.targets);
  const MetricsReport test_m = evaluate(graph, prepared.split.test.features, prepared.split.test.targets);
  print_report(out, "train", train_m);
  print_report(out, "test", test_m);

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  const std::string data_sum = checksum(data_bytes);

  CheckpointExtras extras;
  extras.metadata["split_seed"] = std::to_string(s.seed);
  extras.metadata["n_train"] = std::to_string(s.n_train);
  extras.metadata["validation_fraction"] = format_shortest(s.train.validation_fraction);
  extras.metadata["dataset_checksum"] = data_sum;
  extras.tensors.push_back({"normalizer.mu", prepared.normalizer.mu});
  extras.tensors.push_back({"normalizer.sigma", prepared.normalizer.sigma});
  checkpoint_save(graph, dir / kCheckpointFile, extras);
  write_history_csv(history, dir / kHistoryFile);

  KeyValueFile manifest;
  manifest.set("data", fs::absolute(s.data).string());
  manifest.set("spec", s.spec.empty() ? "" : fs::absolute(s.spec).string());
  manifest.set("seed", std::to_string(s.seed));
  manifest.set("epochs", std::to_string(s.train.epochs));
  manifest.set("batch_size", std::to_string(s.train.batch_size));
  manifest.set("learning_rate", format_shortest(s.train.learning_rate));
  manifest.set("validation_fraction", format_shortest(s.train.validation_fraction));
  manifest.set("n_train", std::to_string(s.n_train));
  manifest.set("shuffle_each_epoch", s.train.shuffle_each_epoch ? "true" : "false");
  const AdamHyper adam;
  manifest.set("adam_beta1", format_shortest(adam.beta1));
  manifest.set("adam_beta2", format_shortest(adam.beta2));
  manifest.set("adam_epsilon", format_shortest(adam.epsilon));
  manifest.set("dataset_checksum", data_sum);
  manifest.set("checkpoint", kCheckpointFile);
  manifest.set("history", kHistoryFile);
  manifest.set("train_r2", format_shortest(train_m.r2));
  manifest.set("test_r2", format_shortest(test_m.r2));
  manifest.set("test_mse", format_shortest(test_m.mse));
  manifest.set("duration_seconds", format_fixed(history.duration_seconds, 2));
  manifest.set("created_at", utc_timestamp());
  write_file(dir / kManifestFile, manifest.render("mldnn run manifest"));

  out << "wrote " << (dir / kCheckpointFile).string() << ", " << (dir / kHistoryFile).string() << ", "
      << (dir / kManifestFile).string() << "\n";
  return kExitOk;
}

struct LoadedRun {
  Checkpoint checkpoint;
  Normalizer normalizer;
  Dataset train_full;
  Dataset test;
};

const Matrix& extra_tensor(const Checkpoint& cp, const std::string& name) {
  for (const auto& t : cp.extras.tensors)
    if (t.name == name) return t.value;
  throw ConfigError("checkpoint has no '" + name + "' tensor; it was not written by `mldnn train`");
}

const std::string& metadata(const Checkpoint& cp, const std::string& key) {
  const auto it = cp.extras.metadata.find(key);
  if (it == cp.extras.metadata.end())
    throw ConfigError("checkpoint metadata lacks '" + key + "'; it was not written by `mldnn train`");
  return it->second;
}

LoadedRun load_run(const std::string& checkpoint_path, const std::string& data_path, std::ostream& err) {
  LoadedRun run{checkpoint_load(checkpoint_path), {}, {}, {}};
  run.normalizer.mu = extra_tensor(run.checkpoint, "normalizer.mu");
  run.normalizer.sigma = extra_tensor(run.checkpoint, "normalizer.sigma");
  const auto seed = parse_value<std::uint64_t>("split_seed", metadata(run.checkpoint, "split_seed"));
  const auto n_train = parse_value<std::size_t>("n_train", metadata(run.checkpoint, "n_train"));

  const std::string bytes = read_file(data_path);
  if (const std::string sum = checksum(bytes); sum != metadata(run.checkpoint, "dataset_checksum")) {
    err << "warning: dataset checksum " << sum << " differs from the one recorded at training time\n";
  }
  const Dataset d = parse_dataset(bytes);
  auto [train_raw, test_raw] = train_test_split(d, seed, n_train);
  run.train_full = with_features(train_raw, transform(run.normalizer, train_raw.features));
  run.test = with_features(test_raw, transform(run.normalizer, test_raw.features));
  return run;
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedRun run = load_run(o.checkpoint, o.data, err);
  const ModelGraph& g = run.checkpoint.graph;
  print_report(out, "train", evaluate(g, run.train_full.features, run.train_full.targets));
  print_report(out, "test", evaluate(g, run.test.features, run.test.targets));

  if (!o.report_dir.empty()) {
    const fs::path dir(o.report_dir);
    fs::create_directories(dir);
    const EvalPair test_pair{run.test.targets, predict(g, run.test.features)};
    regression_scatter(test_pair, dir / "scatter.csv", dir / "scatter.svg");
    error_histogram(test_pair, o.bins, dir / "histogram.csv", dir / "histogram.svg");
    write_file(dir / "true_vs_predicted.csv", render_true_vs_predicted(test_pair));
    out << "wrote scatter.csv, scatter.svg, histogram.csv, histogram.svg, true_vs_predicted.csv to "
        << dir.string() << "\n";
  }
  return kExitOk;
}

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedRun run = load_run(o.checkpoint, o.data, err);
  const ModelGraph& g = run.checkpoint.graph;
  const MetricsReport nn = evaluate(g, run.test.features, run.test.targets);

  std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
  const OlsResult ols =
      ols_fit_predict(run.train_full.features, run.train_full.targets, run.test.features, names);
  const MetricsReport lr = compute_metrics({run.test.targets, ols.predictions});

  const std::vector<ComparisonRow> computed{make_computed_row("Multi-level NN", nn),
                                            make_computed_row("Linear Regression (OLS)", lr)};
  const auto merged = merge_comparison(computed);
  comparison_table(computed, o.out);
  for (const auto& r : merged) {
    out << std::left << std::setw(26) << r.name << std::right << std::fixed << std::setprecision(2)
        << " R2=" << r.r2 << " MSE=" << std::setw(6) << r.mse << " RMSE=" << r.rmse << " MAE=" << r.mae
        << "  [" << to_string(r.source) << "]\n";
  }
  out.unsetf(std::ios::floatfield);
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

int cmd_gradcheck(const GradcheckOptions& o, std::ostream& out) {
  const ArchitectureSpec arch = load_architecture(o.spec);
  if (arch.output_units != 1) throw ConfigError("gradcheck needs a single-output architecture");
  const std::uint64_t seed = o.seed ? *o.seed : env_seed_or(0);
  ModelGraph g = build_from_spec(arch, seed);

  Rng rng(derive_seed(seed, 5));
  Matrix x(o.rows, g.input_width());
  Matrix y(o.rows, 1);
  for (double& v : x.data()) v = rng.normal();
  for (double& v : y.data()) v = rng.normal();

  GradCheckOptions opts;
  opts.seed = seed;
  const auto r = grad_check(g, x, y, o.h, o.tolerance, opts);
  out << "max relative error: " << std::scientific << std::setprecision(3) << r.max_relative_error
      << " (worst tensor: " << r.worst_tensor << ", " << std::dec << r.scalars_checked
      << " scalars checked, tolerance " << o.tolerance << ")\n";
  out.unsetf(std::ios::floatfield);
  out << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kExitOk : kExitDomainError;
}

int cmd_spec_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const ArchitectureSpec spec = parse_spec(read_file(path));
    const ModelGraph g = build_from_spec(spec);
    const auto census = param_count(g);
    out << "ok: " << spec.levels.size() << " levels, " << g.count_kind(NodeKind::dense) - 1
        << " hidden dense layers, " << g.count_kind(NodeKind::concat) << " concat nodes, "
        << g.nodes().size() << " nodes, " << census.trainable << " trainable / "
        << census.non_trainable << " non-trainable parameters\n";
    return kExitOk;
  } catch (const SpecValidationError& e) {
    err << path << ": " << e.violations().size() << " violation(s)\n";
    for (const auto& v : e.violations()) err << "  - " << v << "\n";
    return kExitDomainError;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level dense network toolkit for tabular regression", "mldnn"};
  app.require_subcommand(1);

  TrainOptions train_o;
  auto* train = app.add_subcommand("train", "Train a model and write checkpoint, history and manifest");
  train->add_option("--data", train_o.data, "Housing CSV");
  train->add_option("--spec", train_o.spec, "Architecture spec file (default: built-in network)");
  train->add_option("--config", train_o.config, "key=value config or manifest from an earlier run");
  train->add_option("--seed", train_o.seed, "Seed for split, init and shuffling (fallback: MLDNN_SEED)");
  train->add_option("--epochs", train_o.epochs, "Epochs (default 1000)");
  train->add_option("--batch-size", train_o.batch_size, "Mini-batch size (default 32)");
  train->add_option("--lr", train_o.lr, "Adam learning rate (default 0.001)");
  train->add_option("--validation", train_o.validation, "Validation fraction (default 0.2)");
  train->add_option("--n-train", train_o.n_train, "Training rows before holdout (default 405)");
  train->add_option("--out", train_o.out, "Output directory")->required();
  train->add_flag("--quiet", train_o.quiet, "No per-epoch progress");

  EvalOptions eval_o;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on its test split");
  eval->add_option("--checkpoint", eval_o.checkpoint, "Checkpoint file")->required();
  eval->add_option("--data", eval_o.data, "Housing CSV")->required();
  eval->add_option("--report-dir", eval_o.report_dir, "Write scatter, histogram and table files here");
  eval->add_option("--bins", eval_o.bins, "Histogram bins (default 25)")->check(CLI::PositiveNumber);

  CompareOptions cmp_o;
  auto* compare = app.add_subcommand("compare", "Comparison table against reference regressors");
  compare->add_option("--checkpoint", cmp_o.checkpoint, "Checkpoint file")->required();
  compare->add_option("--data", cmp_o.data, "Housing CSV")->required();
  compare->add_option("--out", cmp_o.out, "Output CSV")->required();

  GradcheckOptions gc_o;
  auto* gradcheck = app.add_subcommand("gradcheck", "Check analytic gradients against finite differences");
  gradcheck->add_option("--spec", gc_o.spec, "Architecture spec file (default: built-in network)");
  gradcheck->add_option("--seed", gc_o.seed, "Seed for weights and the random batch");
  gradcheck->add_option("--rows", gc_o.rows, "Batch rows (default 4)")->check(CLI::Range(2, 8));
  gradcheck->add_option("--step", gc_o.h, "Finite-difference step (default 1e-5)")->check(CLI::Range(1e-6, 1e-4));
  gradcheck->add_option("--tolerance", gc_o.tolerance, "Max relative error (default 1e-4)");

  std::string spec_path;
  auto* spec_validate = app.add_subcommand("spec-validate", "Parse and validate an architecture spec");
  spec_validate->add_option("file", spec_path, "Spec file")->required();

  std::vector<std::string> argv_storage{"mldnn"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_o, out, err);
    if (*eval) return cmd_eval(eval_o, out, err);
    if (*compare) return cmd_compare(cmp_o, out, err);
    if (*gradcheck) return cmd_gradcheck(gc_o, out);
    if (*spec_validate) return cmd_spec_validate(spec_path, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace mldnn::cli
