#pragma once

// Finite-horizon linear mixture MDPs.
//
// Stages, states, actions and modes are 0-based throughout. A stage-h kernel
// is the mixture P_h(.|s,a) = sum_i theta_h[i] * phi_i(.|s,a) of d basis
// modes that do not depend on h; only the weights are stage-indexed.

#include <cstddef>
#include <span>
#include <vector>

namespace lmdr {

/// Tolerance for "sums to one" checks on modes, weights and kernels.
inline constexpr double kSimplexTol = 1e-12;

/// Dense basis-mode tensor phi[i][s][a][s'].
class BasisModes {
 public:
  /// Stochastic: every phi_i(.|s,a) is a distribution. StochasticOrEmpty also
  /// admits all-zero rows, which the one-hot tabular embedding needs (a mode
  /// belongs to exactly one (s,a) block).
  enum class RowCheck { Stochastic, StochasticOrEmpty };

  BasisModes() = default;
  /// `probs` is laid out mode-major: ((i * S + s) * A + a) * S + s'.
  /// Throws std::invalid_argument if a row violates `check`.
  BasisModes(std::size_t num_modes, std::size_t num_states, std::size_t num_actions,
             std::vector<double> probs, RowCheck check = RowCheck::Stochastic);

  std::size_t num_modes() const { return num_modes_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double prob(std::size_t mode, std::size_t s, std::size_t a, std::size_t next) const {
    return probs_[offset(mode, s, a) + next];
  }

  /// phi_i(.|s,a) as a span over next states.
  std::span<const double> row(std::size_t mode, std::size_t s, std::size_t a) const;

  /// The d-vector phi(next|s,a) = (phi_1(next|s,a), ..., phi_d(next|s,a)).
  std::vector<double> features(std::size_t s, std::size_t a, std::size_t next) const;

  const std::vector<double>& data() const { return probs_; }

 private:
  std::size_t offset(std::size_t mode, std::size_t s, std::size_t a) const {
    return ((mode * num_states_ + s) * num_actions_ + a) * num_states_;
  }

  std::size_t num_modes_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> probs_;
};

/// Deterministic rewards r_h(s,a) in [0,1].
class RewardTable {
 public:
  RewardTable() = default;
  RewardTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
              std::vector<double> values);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double operator()(std::size_t h, std::size_t s, std::size_t a) const {
    return values_[(h * num_states_ + s) * num_actions_ + a];
  }
  const std::vector<double>& data() const { return values_; }

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

/// Per-stage weight vectors theta_h, each on the simplex.
using MixtureWeights = std::vector<std::vector<double>>;

/// Throws std::invalid_argument unless `theta` has `d` entries on the simplex.
void require_simplex(std::span<const double> theta, std::size_t d, const char* what);

/// Finite episodic MDP with kernels <phi(.|s,a), theta_h>.
class MixtureMDP {
 public:
  MixtureMDP(BasisModes modes, MixtureWeights weights, RewardTable rewards,
             std::size_t initial_state);

  std::size_t num_states() const { return modes_.num_states(); }
  std::size_t num_actions() const { return modes_.num_actions(); }
  std::size_t num_modes() const { return modes_.num_modes(); }
  std::size_t horizon() const { return rewards_.horizon(); }
  std::size_t initial_state() const { return initial_state_; }

  const BasisModes& modes() const { return modes_; }
  const MixtureWeights& weights() const { return weights_; }
  const RewardTable& rewards() const { return rewards_; }

  /// Copy with the stage-h weight vector replaced.
  MixtureMDP with_stage_weights(std::size_t h, std::vector<double> theta) const;

 private:
  BasisModes modes_;
  MixtureWeights weights_;
  RewardTable rewards_;
  std::size_t initial_state_ = 0;
};

/// Deterministic Markov policy: one action per (stage, state).
class Policy {
 public:
  Policy() = default;
  Policy(std::size_t horizon, std::size_t num_states, std::vector<std::size_t> actions);
  static Policy constant(std::size_t horizon, std::size_t num_states, std::size_t action);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t operator()(std::size_t h, std::size_t s) const { return actions_[h * num_states_ + s]; }
  std::size_t& at(std::size_t h, std::size_t s) { return actions_[h * num_states_ + s]; }
  const std::vector<std::size_t>& actions() const { return actions_; }

  bool operator==(const Policy&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::vector<std::size_t> actions_;
};

/// V has H+1 stages (the last is identically zero), Q has H.
struct ValueTables {
  ValueTables() = default;
  ValueTables(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

  double& v(std::size_t h, std::size_t s) { return v_data[h * num_states + s]; }
  double v(std::size_t h, std::size_t s) const { return v_data[h * num_states + s]; }
  double& q(std::size_t h, std::size_t s, std::size_t a) {
    return q_data[(h * num_states + s) * num_actions + a];
  }
  double q(std::size_t h, std::size_t s, std::size_t a) const {
    return q_data[(h * num_states + s) * num_actions + a];
  }
  std::span<const double> v_stage(std::size_t h) const {
    return {v_data.data() + h * num_states, num_states};
  }
  std::span<const double> q_row(std::size_t h, std::size_t s) const {
    return {q_data.data() + (h * num_states + s) * num_actions, num_actions};
  }

  std::size_t horizon = 0;
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> v_data;
  std::vector<double> q_data;
};

struct PlanResult {
  ValueTables tables;
  Policy policy;
};

/// <phi(.|s,a), theta> for an arbitrary weight vector.
std::vector<double> mixture_kernel(const BasisModes& modes, std::span<const double> theta,
                                   std::size_t s, std::size_t a);

/// P_h(.|s,a) of the MDP. Throws std::out_of_range on bad indices.
std::vector<double> kernel(const MixtureMDP& mdp, std::size_t h, std::size_t s, std::size_t a);

/// Entry i is sum_{s'} phi_i(s'|s,a) v[s'].
std::vector<double> mode_values(const BasisModes& modes, std::size_t s, std::size_t a,
                                std::span<const double> v);

/// First index of the maximum; ties go to the smallest action.
std::size_t argmax_action(std::span<const double> q);

/// Standard (non-robust) backward induction.
PlanResult exact_value_iteration(const MixtureMDP& mdp);

/// Backward induction under a fixed policy. Q is filled for every action.
ValueTables evaluate_policy_exact(const MixtureMDP& mdp, const Policy& policy);

/// Tabular kernel P(s'|s,a), layout (s * A + a) * S + s'.
class TabularKernel {
 public:
  TabularKernel(std::size_t num_states, std::size_t num_actions, std::vector<double> probs);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double operator()(std::size_t s, std::size_t a, std::size_t next) const {
    return probs_[(s * num_actions_ + a) * num_states_ + next];
  }
  std::span<const double> row(std::size_t s, std::size_t a) const {
    return {probs_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> probs_;
};

struct MixtureEmbedding {
  BasisModes modes;
  std::vector<double> theta;
};

/// Index of (s, a, s') in the one-hot embedding.
inline std::size_t onehot_index(std::size_t s, std::size_t a, std::size_t next,
                                std::size_t num_states, std::size_t num_actions) {
  return (s * num_actions + a) * num_states + next;
}

/// One-hot embedding of a tabular kernel: d = S*A*S modes, phi_i(s'|s,a) = 1
/// iff i is the index of (s,a,s'), and theta_i = P(s'|s,a). The weight vector
/// is normalised per (s,a) block rather than globally, so `theta` sums to S*A;
/// each block is a distribution.
MixtureEmbedding tabular_onehot_embedding(const TabularKernel& kernel);

}  // namespace lmdr
