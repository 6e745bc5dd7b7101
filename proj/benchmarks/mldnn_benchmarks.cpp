#include <benchmark/benchmark.h>

#include <random>

#include "mldnn/data.hpp"
#include "mldnn/graph.hpp"
#include "mldnn/optim.hpp"
#include "mldnn/train.hpp"

namespace {

mldnn::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  mldnn::Matrix m(rows, cols);
  for (double& v : m.data()) v = dist(gen);
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(32, n, 1);
  const auto b = random_matrix(n, 128, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mldnn::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * 32 * static_cast<std::int64_t>(n) * 128);
}
BENCHMARK(BM_Matmul)->Arg(13)->Arg(128)->Arg(256)->Arg(384);

void BM_ForwardBackward(benchmark::State& state) {
  auto g = mldnn::build_default(1);
  const auto x = random_matrix(32, 13, 3);
  const auto y = random_matrix(32, 1, 4);
  for (auto _ : state) {
    const auto pred = mldnn::forward(g, x, mldnn::Mode::train);
    mldnn::backward(g, mldnn::mse_loss(pred, y).grad);
  }
}
BENCHMARK(BM_ForwardBackward)->Unit(benchmark::kMicrosecond);

void BM_Predict(benchmark::State& state) {
  const auto g = mldnn::build_default(1);
  const auto x = random_matrix(101, 13, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mldnn::predict(g, x));
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
  mldnn::SplitDataset data;
  data.train.features = random_matrix(324, 13, 6);
  data.train.targets = random_matrix(324, 1, 7);
  data.train.row_ids.resize(324);
  data.validation.features = random_matrix(81, 13, 8);
  data.validation.targets = random_matrix(81, 1, 9);
  data.validation.row_ids.resize(81);
  mldnn::TrainConfig cfg;
  cfg.epochs = 1;
  auto g = mldnn::build_default(1);
  for (auto _ : state) mldnn::train_loop(g, data, cfg);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
