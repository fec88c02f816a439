#include "lmdr/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lmdr {

namespace {

void require_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n)
    throw std::out_of_range(std::string(what) + " index " + std::to_string(i) +
                            " out of range [0, " + std::to_string(n) + ")");
}

}  // namespace

BasisModes::BasisModes(std::size_t num_modes, std::size_t num_states, std::size_t num_actions,
                       std::vector<double> probs, RowCheck check)
    : num_modes_(num_modes),
      num_states_(num_states),
      num_actions_(num_actions),
      probs_(std::move(probs)) {
  if (num_modes_ == 0) throw std::invalid_argument("basis modes: d >= 1 required");
  if (num_states_ == 0 || num_actions_ == 0)
    throw std::invalid_argument("basis modes: state and action counts must be positive");
  if (probs_.size() != num_modes_ * num_states_ * num_actions_ * num_states_)
    throw std::invalid_argument("basis modes: tensor size does not match d*S*A*S");
  for (std::size_t i = 0; i < num_modes_; ++i)
    for (std::size_t s = 0; s < num_states_; ++s)
      for (std::size_t a = 0; a < num_actions_; ++a) {
        double total = 0.0;
        for (double p : row(i, s, a)) {
          if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("basis modes: entries must lie in [0,1]");
          total += p;
        }
        const bool empty_ok = check == RowCheck::StochasticOrEmpty && total == 0.0;
        if (!empty_ok && std::abs(total - 1.0) > kSimplexTol)
          throw std::invalid_argument("basis modes: phi_i(.|s,a) must sum to 1 (mode " +
                                      std::to_string(i) + ", state " + std::to_string(s) +
                                      ", action " + std::to_string(a) + ")");
      }
}

std::span<const double> BasisModes::row(std::size_t mode, std::size_t s, std::size_t a) const {
  return {probs_.data() + offset(mode, s, a), num_states_};
}

std::vector<double> BasisModes::features(std::size_t s, std::size_t a, std::size_t next) const {
  std::vector<double> out(num_modes_);
  for (std::size_t i = 0; i < num_modes_; ++i) out[i] = prob(i, s, a, next);
  return out;
}

RewardTable::RewardTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                         std::vector<double> values)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
  if (horizon_ == 0) throw std::invalid_argument("rewards: horizon must be positive");
  if (values_.size() != horizon_ * num_states_ * num_actions_)
    throw std::invalid_argument("rewards: table size does not match H*S*A");
  for (double r : values_)
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rewards: values must lie in [0,1]");
}

void require_simplex(std::span<const double> theta, std::size_t d, const char* what) {
  if (theta.size() != d)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(d) + " entries");
  double total = 0.0;
  for (double t : theta) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(what) + ": entries must be >= 0");
    total += t;
  }
  if (std::abs(total - 1.0) > kSimplexTol)
    throw std::invalid_argument(std::string(what) + ": entries must sum to 1");
}

MixtureMDP::MixtureMDP(BasisModes modes, MixtureWeights weights, RewardTable rewards,
                       std::size_t initial_state)
    : modes_(std::move(modes)),
      weights_(std::move(weights)),
      rewards_(std::move(rewards)),
      initial_state_(initial_state) {
  if (rewards_.num_states() != modes_.num_states() || rewards_.num_actions() != modes_.num_actions())
    throw std::invalid_argument("mixture mdp: reward table shape does not match basis modes");
  if (weights_.size() != rewards_.horizon())
    throw std::invalid_argument("mixture mdp: need one weight vector per stage");
  for (const auto& theta : weights_) require_simplex(theta, modes_.num_modes(), "mixture weights");
  require_index(initial_state_, modes_.num_states(), "initial state");
  for (std::size_t h = 0; h < weights_.size(); ++h)
    for (std::size_t s = 0; s < num_states(); ++s)
      for (std::size_t a = 0; a < num_actions(); ++a) {
        double total = 0.0;
        for (double p : mixture_kernel(modes_, weights_[h], s, a)) total += p;
        if (std::abs(total - 1.0) > 1e-10)
          throw std::invalid_argument("mixture mdp: induced kernel is not a distribution");
      }
}

MixtureMDP MixtureMDP::with_stage_weights(std::size_t h, std::vector<double> theta) const {
  require_index(h, horizon(), "stage");
  MixtureWeights w = weights_;
  w[h] = std::move(theta);
  return MixtureMDP(modes_, std::move(w), rewards_, initial_state_);
}

Policy::Policy(std::size_t horizon, std::size_t num_states, std::vector<std::size_t> actions)
    : horizon_(horizon), num_states_(num_states), actions_(std::move(actions)) {
  if (actions_.size() != horizon_ * num_states_)
    throw std::invalid_argument("policy: need one action per (stage, state)");
}

Policy Policy::constant(std::size_t horizon, std::size_t num_states, std::size_t action) {
  return Policy(horizon, num_states, std::vector<std::size_t>(horizon * num_states, action));
}

ValueTables::ValueTables(std::size_t horizon_, std::size_t num_states_, std::size_t num_actions_)
    : horizon(horizon_),
      num_states(num_states_),
      num_actions(num_actions_),
      v_data((horizon_ + 1) * num_states_, 0.0),
      q_data(horizon_ * num_states_ * num_actions_, 0.0) {}

std::vector<double> mixture_kernel(const BasisModes& modes, std::span<const double> theta,
                                   std::size_t s, std::size_t a) {
  if (theta.size() != modes.num_modes())
    throw std::invalid_argument("mixture kernel: weight dimension mismatch");
  require_index(s, modes.num_states(), "state");
  require_index(a, modes.num_actions(), "action");
  std::vector<double> p(modes.num_states(), 0.0);
  for (std::size_t i = 0; i < modes.num_modes(); ++i) {
    if (theta[i] == 0.0) continue;
    const auto phi = modes.row(i, s, a);
    for (std::size_t n = 0; n < p.size(); ++n) p[n] += theta[i] * phi[n];
  }
  return p;
}

std::vector<double> kernel(const MixtureMDP& mdp, std::size_t h, std::size_t s, std::size_t a) {
  require_index(h, mdp.horizon(), "stage");
  return mixture_kernel(mdp.modes(), mdp.weights()[h], s, a);
}

std::vector<double> mode_values(const BasisModes& modes, std::size_t s, std::size_t a,
                                std::span<const double> v) {
  if (v.size() != modes.num_states())
    throw std::invalid_argument("mode values: value vector must have one entry per state");
  require_index(s, modes.num_states(), "state");
  require_index(a, modes.num_actions(), "action");
  std::vector<double> out(modes.num_modes(), 0.0);
  for (std::size_t i = 0; i < modes.num_modes(); ++i) {
    const auto phi = modes.row(i, s, a);
    double acc = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) acc += phi[n] * v[n];
    out[i] = acc;
  }
  return out;
}

std::size_t argmax_action(std::span<const double> q) {
  if (q.empty()) throw std::invalid_argument("argmax over empty action set");
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

namespace {

double expect(std::span<const double> p, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) acc += p[n] * v[n];
  return acc;
}

}  // namespace

PlanResult exact_value_iteration(const MixtureMDP& mdp) {
  const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
  ValueTables t(H, S, A);
  Policy pi = Policy::constant(H, S, 0);
  for (std::size_t h = H; h-- > 0;) {
    const auto v_next = t.v_stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a)
        t.q(h, s, a) = mdp.rewards()(h, s, a) + expect(kernel(mdp, h, s, a), v_next);
      pi.at(h, s) = argmax_action(t.q_row(h, s));
      t.v(h, s) = t.q(h, s, pi(h, s));
    }
  }
  return {std::move(t), std::move(pi)};
}

ValueTables evaluate_policy_exact(const MixtureMDP& mdp, const Policy& policy) {
  const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
  if (policy.horizon() != H || policy.num_states() != S)
    throw std::invalid_argument("policy evaluation: policy shape does not match the mdp");
  ValueTables t(H, S, A);
  for (std::size_t h = H; h-- > 0;) {
    const auto v_next = t.v_stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a)
        t.q(h, s, a) = mdp.rewards()(h, s, a) + expect(kernel(mdp, h, s, a), v_next);
      require_index(policy(h, s), A, "policy action");
      t.v(h, s) = t.q(h, s, policy(h, s));
    }
  }
  return t;
}

TabularKernel::TabularKernel(std::size_t num_states, std::size_t num_actions, std::vector<double> probs)
    : num_states_(num_states), num_actions_(num_actions), probs_(std::move(probs)) {
  if (num_states_ == 0 || num_actions_ == 0)
    throw std::invalid_argument("tabular kernel: state and action counts must be positive");
  if (probs_.size() != num_states_ * num_actions_ * num_states_)
    throw std::invalid_argument("tabular kernel: size does not match S*A*S");
  for (std::size_t s = 0; s < num_states_; ++s)
    for (std::size_t a = 0; a < num_actions_; ++a) {
      double total = 0.0;
      for (double p : row(s, a)) {
        if (!(p >= 0.0)) throw std::invalid_argument("tabular kernel: negative probability");
        total += p;
      }
      if (std::abs(total - 1.0) > kSimplexTol)
        throw std::invalid_argument("tabular kernel: row (" + std::to_string(s) + ", " +
                                    std::to_string(a) + ") is not a distribution");
    }
}

MixtureEmbedding tabular_onehot_embedding(const TabularKernel& kernel) {
  const std::size_t S = kernel.num_states(), A = kernel.num_actions();
  const std::size_t d = S * A * S;
  std::vector<double> phi(d * S * A * S, 0.0);
  std::vector<double> theta(d, 0.0);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t n = 0; n < S; ++n) {
        const std::size_t i = onehot_index(s, a, n, S, A);
        phi[((i * S + s) * A + a) * S + n] = 1.0;
        theta[i] = kernel(s, a, n);
      }
  return {BasisModes(d, S, A, std::move(phi), BasisModes::RowCheck::StochasticOrEmpty),
          std::move(theta)};
}

}  // namespace lmdr
