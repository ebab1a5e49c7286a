#include <benchmark/benchmark.h>

#include <array>
#include <random>

#include "htdc/detect.hpp"
#include "htdc/model.hpp"
#include "htdc/scaler.hpp"
#include "htdc/synth.hpp"
#include "htdc/trainer.hpp"

using namespace htdc;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

HTdcAutoencoder edge_model(EdgeId edge, std::size_t features) {
  return init_autoencoder(default_training_config(edge), features);
}

std::size_t edge_width(EdgeId e) { return e == EdgeId::Edge1 ? 9 : e == EdgeId::Edge2 ? 19 : 15; }

}  // namespace

static void BM_MlpForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto model = edge_model(EdgeId::Edge2, 19);
  const Matrix x = random_matrix(batch, 19, 1);
  const Matrix cot = random_matrix(batch, model.encoder().output_size(), 2);
  for (auto _ : state) {
    const auto trace = forward(model.encoder(), x);
    auto r = backward(model.encoder(), trace, cot);
    benchmark::DoNotOptimize(r.input_cotangent.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}
BENCHMARK(BM_MlpForwardBackward)->Arg(32)->Arg(256);

static void BM_TotalLossGradient(benchmark::State& state) {
  const auto edge = edge_from_int(static_cast<int>(state.range(0)));
  const std::size_t f = edge_width(edge);
  const auto model = edge_model(edge, f);
  const TripleBatch batch{random_matrix(32, f, 1), random_matrix(32, f, 2),
                          random_matrix(32, f, 3), 1.0};
  const double alpha = default_training_config(edge).alpha;
  for (auto _ : state) {
    auto lg = total_loss_with_gradients(model, batch, alpha);
    benchmark::DoNotOptimize(lg.loss.total);
  }
}
BENCHMARK(BM_TotalLossGradient)->DenseRange(1, 3);

static void BM_TrainEpoch(benchmark::State& state) {
  TankSystemConfig sys;
  sys.horizon = static_cast<std::size_t>(state.range(0));
  const auto raw = simulate(sys, {});
  const auto frame = apply_scaler(fit_scaler(raw), raw);
  TrainingConfig cfg = default_training_config(EdgeId::Edge1);
  cfg.epochs = 1;
  for (auto _ : state) {
    auto r = train(cfg, frame);
    benchmark::DoNotOptimize(r.history.back().total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_Smooth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix scores = random_matrix(n, 1, 4);
  for (auto _ : state) {
    auto s = smooth(scores.data(), 7);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Smooth)->Arg(4000)->Arg(100000);

static void BM_Simulate(benchmark::State& state) {
  TankSystemConfig sys;
  for (auto _ : state) {
    auto f = simulate(sys, default_attack_scenarios());
    benchmark::DoNotOptimize(f.values.data().data());
  }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
