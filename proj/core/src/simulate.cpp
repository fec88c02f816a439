#include "lmdr/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "lmdr/rng.hpp"

namespace lmdr {

namespace {

template <typename ChooseAction>
Trajectory rollout(const MixtureMDP& mdp, std::uint64_t seed, ChooseAction&& choose) {
  Rng rng(seed);
  Trajectory out;
  out.reserve(mdp.horizon());
  std::size_t s = mdp.initial_state();
  for (std::size_t h = 0; h < mdp.horizon(); ++h) {
    const std::size_t a = choose(h, s, rng);
    if (a >= mdp.num_actions()) throw std::out_of_range("rollout: action out of range");
    const auto p = kernel(mdp, h, s, a);
    const std::size_t next = rng.categorical(p);
    out.push_back({s, a, mdp.rewards()(h, s, a), next});
    s = next;
  }
  return out;
}

}  // namespace

Trajectory simulate_episode(const MixtureMDP& mdp, const Policy& policy, std::uint64_t seed) {
  if (policy.horizon() != mdp.horizon() || policy.num_states() != mdp.num_states())
    throw std::invalid_argument("simulate: policy shape does not match the mdp");
  return rollout(mdp, seed, [&](std::size_t h, std::size_t s, Rng&) { return policy(h, s); });
}

Trajectory simulate_uniform_episode(const MixtureMDP& mdp, std::uint64_t seed) {
  const std::size_t A = mdp.num_actions();
  return rollout(mdp, seed, [A](std::size_t, std::size_t, Rng& rng) { return rng.index(A); });
}

double cumulative_reward(const Trajectory& trajectory) {
  double total = 0.0;
  for (const auto& step : trajectory) total += step.reward;
  return total;
}

MonteCarloEstimate evaluate_policy_mc(const MixtureMDP& mdp, const Policy& policy,
                                      std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) throw std::invalid_argument("evaluate: episodes must be >= 1");
  // Welford
  double mean = 0.0, m2 = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    const double g = cumulative_reward(simulate_episode(mdp, policy, derive_seed(seed, {e})));
    const double delta = g - mean;
    mean += delta / static_cast<double>(e + 1);
    m2 += delta * (g - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.episodes = episodes;
  if (episodes > 1) {
    const double var = m2 / static_cast<double>(episodes - 1);
    est.std_error = std::sqrt(var / static_cast<double>(episodes));
  }
  return est;
}

}  // namespace lmdr
