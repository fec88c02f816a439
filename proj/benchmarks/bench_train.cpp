#include <benchmark/benchmark.h>

#include "lmdr/harness.hpp"
#include "lmdr/robust_vi.hpp"

namespace {

void BM_Train(benchmark::State& state, lmdr::Estimator estimator, lmdr::Divergence div, double rho) {
  const lmdr::ExperimentConfig config;
  const auto env = lmdr::build_source_env(config);
  const auto data = lmdr::collect_dataset(env, static_cast<std::size_t>(state.range(0)), 7);
  lmdr::TrainConfig tc;
  tc.estimator = estimator;
  tc.uncertainty = {div, rho};
  for (auto _ : state) benchmark::DoNotOptimize(lmdr::train(env.modes(), env.rewards(), data, tc).tables.v(0, 0));
}

void BM_CollectDataset(benchmark::State& state) {
  const auto env = lmdr::build_source_env(lmdr::ExperimentConfig{});
  for (auto _ : state)
    benchmark::DoNotOptimize(lmdr::collect_dataset(env, static_cast<std::size_t>(state.range(0)), 7).size());
}

}  // namespace

BENCHMARK_CAPTURE(BM_Train, ttr_tv, lmdr::Estimator::TTR, lmdr::Divergence::TV, 0.35)->Arg(500)->Arg(5000);
BENCHMARK_CAPTURE(BM_Train, ttr_kl, lmdr::Estimator::TTR, lmdr::Divergence::KL, 5.0)->Arg(500);
BENCHMARK_CAPTURE(BM_Train, vtr_chi2, lmdr::Estimator::VTR, lmdr::Divergence::Chi2, 10.0)->Arg(500);
BENCHMARK(BM_CollectDataset)->Arg(500);

BENCHMARK_MAIN();
