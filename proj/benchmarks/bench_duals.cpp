#include <benchmark/benchmark.h>

#include <vector>

#include "lmdr/duals.hpp"
#include "lmdr/rng.hpp"

namespace {

struct Problem {
  std::vector<double> theta0;
  std::vector<double> v;
};

Problem random_problem(std::size_t d, std::uint64_t seed) {
  lmdr::Rng rng(seed);
  Problem p{std::vector<double>(d), std::vector<double>(d)};
  double total = 0.0;
  for (double& t : p.theta0) total += (t = rng.exponential());
  for (double& t : p.theta0) t /= total;
  for (double& x : p.v) x = 3.0 * rng.uniform();
  return p;
}

void run(benchmark::State& state, lmdr::Divergence div, double rho) {
  const auto p = random_problem(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lmdr::worst_case({div, rho}, p.theta0, p.v, 3.0).value);
}

void BM_TvDual(benchmark::State& state) { run(state, lmdr::Divergence::TV, 0.3); }
void BM_KlDual(benchmark::State& state) { run(state, lmdr::Divergence::KL, 1.0); }
void BM_Chi2Dual(benchmark::State& state) { run(state, lmdr::Divergence::Chi2, 1.0); }

}  // namespace

BENCHMARK(BM_TvDual)->Arg(3)->Arg(16)->Arg(64);
BENCHMARK(BM_KlDual)->Arg(3)->Arg(16)->Arg(64);
BENCHMARK(BM_Chi2Dual)->Arg(3)->Arg(16)->Arg(64);
