#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lmdr/mdp.hpp"

namespace lmdr {

struct Step {
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;
};

/// One episode: exactly H steps starting from the MDP's initial state.
using Trajectory = std::vector<Step>;

/// Rolls out `policy`. Deterministic in `seed`.
Trajectory simulate_episode(const MixtureMDP& mdp, const Policy& policy, std::uint64_t seed);

/// Rolls out the uniform-random behavior policy.
Trajectory simulate_uniform_episode(const MixtureMDP& mdp, std::uint64_t seed);

double cumulative_reward(const Trajectory& trajectory);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t episodes = 0;
};

/// Average cumulative reward over `episodes` episodes. Episode e draws from
/// the substream derive_seed(seed, {e}).
MonteCarloEstimate evaluate_policy_mc(const MixtureMDP& mdp, const Policy& policy,
                                      std::size_t episodes, std::uint64_t seed);

}  // namespace lmdr
