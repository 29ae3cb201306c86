#include <benchmark/benchmark.h>

#include <vector>

#include "metricsim/grid.hpp"
#include "metricsim/rng.hpp"
#include "metricsim/stats.hpp"
#include "metricsim/synthetic.hpp"

using namespace metricsim;

namespace {

Embedding random_embedding(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return Embedding{"w", std::move(v)};
}

MetricFactor random_factor(Rng& rng, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = rng.normal();
  }
  return MetricFactor(std::move(m));
}

}  // namespace

static void BM_MetricCosine(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const Embedding a = random_embedding(rng, dim);
  const Embedding b = random_embedding(rng, dim);
  const MetricFactor B = random_factor(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_cosine(a, b, B));
  }
}
BENCHMARK(BM_MetricCosine)->Arg(50)->Arg(300)->Arg(768);

static void BM_MetricCosineBackward(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(2);
  const Embedding a = random_embedding(rng, dim);
  const Embedding b = random_embedding(rng, dim);
  const MetricFactor B = random_factor(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(metric_cosine_backward(a, b, B, 1.0));
  }
}
BENCHMARK(BM_MetricCosineBackward)->Arg(50)->Arg(300);

static void BM_Pearson(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(x, y));
  }
}
BENCHMARK(BM_Pearson)->Arg(406)->Arg(2418);

static void BM_Spearman(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spearman(x, y));
  }
}
BENCHMARK(BM_Spearman)->Arg(406)->Arg(2418);

static void BM_TrainFold(benchmark::State& state) {
  SyntheticSpec spec;
  spec.dim = static_cast<int>(state.range(0));
  spec.n_words = 40;
  spec.noise_sigma = 0.02;
  spec.seed = 7;
  const SyntheticData data = generate_synthetic(spec);
  const auto folds =
      make_folds(static_cast<int>(data.dataset.pairs.size()), 5, 7);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.max_epochs = 25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train_fold(data.dataset, data.store, folds[0], cfg));
  }
}
BENCHMARK(BM_TrainFold)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
