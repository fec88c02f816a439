#pragma once

#include <cstdint>
#include <vector>

#include "lmdr/harness.hpp"
#include "lmdr/mdp.hpp"
#include "lmdr/rng.hpp"
#include "reference.hpp"

namespace fixtures {

// Dense copy of an MDP, kernels mixed by hand from the raw mode tensor.
inline ref::Tabular to_tabular(const lmdr::MixtureMDP& m) {
  const std::size_t H = m.horizon(), S = m.num_states(), A = m.num_actions(), d = m.num_modes();
  ref::Tabular t;
  t.P.assign(H, std::vector<std::vector<std::vector<double>>>(S, std::vector<std::vector<double>>(A, std::vector<double>(S, 0.0))));
  t.R.assign(H, std::vector<std::vector<double>>(S, std::vector<double>(A, 0.0)));
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t a = 0; a < A; ++a) {
        t.R[h][s][a] = m.rewards()(h, s, a);
        for (std::size_t n = 0; n < S; ++n)
          for (std::size_t i = 0; i < d; ++i) t.P[h][s][a][n] += m.weights()[h][i] * m.modes().prob(i, s, a, n);
      }
  return t;
}

inline std::vector<std::vector<std::size_t>> to_nested(const lmdr::Policy& p) {
  std::vector<std::vector<std::size_t>> out(p.horizon(), std::vector<std::size_t>(p.num_states()));
  for (std::size_t h = 0; h < p.horizon(); ++h)
    for (std::size_t s = 0; s < p.num_states(); ++s) out[h][s] = p(h, s);
  return out;
}

inline std::vector<double> dirichlet(lmdr::Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  double total = 0.0;
  for (double& v : x) total += (v = rng.exponential());
  for (double& v : x) v /= total;
  return x;
}

// Random mixture MDP with Dirichlet modes, weights and uniform rewards.
inline lmdr::MixtureMDP random_mdp(std::size_t d, std::size_t S, std::size_t A, std::size_t H, std::uint64_t seed) {
  lmdr::Rng rng(seed);
  std::vector<double> phi;
  for (std::size_t r = 0; r < d * S * A; ++r) {
    const auto row = dirichlet(rng, S);
    phi.insert(phi.end(), row.begin(), row.end());
  }
  lmdr::MixtureWeights w;
  for (std::size_t h = 0; h < H; ++h) w.push_back(dirichlet(rng, d));
  std::vector<double> r(H * S * A);
  for (double& x : r) x = rng.uniform();
  return lmdr::MixtureMDP(lmdr::BasisModes(d, S, A, std::move(phi)), std::move(w),
                          lmdr::RewardTable(H, S, A, std::move(r)), 0);
}

// Two next states with values 0 and 1, one mode pointing at each.
// d = 2, S = 2, A = 1, H = 2; r = 0 at stage 0, r(s=1) = 1 at stage 1.
inline lmdr::MixtureMDP two_state_toy() {
  std::vector<double> phi{1, 0, 1, 0,  // mode 0 -> state 0 from both states
                          0, 1, 0, 1};  // mode 1 -> state 1
  return lmdr::MixtureMDP(lmdr::BasisModes(2, 2, 1, std::move(phi)), {{0.5, 0.5}, {0.5, 0.5}},
                          lmdr::RewardTable(2, 2, 1, {0, 0, 0, 1}), 0);
}

inline lmdr::ExperimentConfig study_config() { return lmdr::ExperimentConfig{}; }

}  // namespace fixtures
