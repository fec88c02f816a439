#pragma once

// Backward robust value iteration on estimated mixture weights (DRTTR/DRVTR),
// plus the doubly pessimistic policy value used as a diagnostic.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lmdr/duals.hpp"
#include "lmdr/estimation.hpp"
#include "lmdr/mdp.hpp"

namespace lmdr {

enum class Estimator { TTR, VTR, TrueTheta };

std::string_view to_string(Estimator e);
/// Accepts "ttr", "vtr", "true". Throws std::invalid_argument.
Estimator parse_estimator(std::string_view name);

struct TrainConfig {
  UncertaintySpec uncertainty;
  /// Ridge parameter; unset means d.
  std::optional<double> lambda_reg;
  Estimator estimator = Estimator::TTR;
  bool value_clip = true;
  /// Only used to report the per-stage confidence radius.
  double zeta = 0.1;
  double p_min = 0.1;

  double resolved_lambda(std::size_t d) const { return lambda_reg.value_or(static_cast<double>(d)); }
  void validate() const;
};

/// Q_h[s,a] = r_h(s,a) + worst_case(theta, phi^{v_next}(s,a)) with truncation
/// ceiling H - h - 1 (0-based h). Returns an S*A table, row-major in s.
std::vector<double> robust_backup(const BasisModes& modes, std::span<const double> theta,
                                  const UncertaintySpec& spec, std::span<const double> v_next,
                                  const RewardTable& rewards, std::size_t h, bool value_clip = true);

struct TrainResult {
  Policy policy;
  ValueTables tables;
  /// One per stage for TTR/VTR, empty for TrueTheta.
  std::vector<RidgeEstimate> estimates;
  /// The nominal weights actually used in each backup.
  MixtureWeights nominal;
};

/// Robust value iteration from an offline dataset. `true_theta` is required
/// for Estimator::TrueTheta and ignored otherwise. Greedy ties go to the
/// smallest action index.
TrainResult train(const BasisModes& modes, const RewardTable& rewards, const OfflineDataset& data,
                  const TrainConfig& config, const MixtureWeights* true_theta = nullptr);

/// Fixed-policy robust backward induction with per-stage nominal weights.
ValueTables robust_policy_evaluation(const BasisModes& modes, const RewardTable& rewards,
                                     const MixtureWeights& nominal, const UncertaintySpec& spec,
                                     const Policy& policy, bool value_clip = true);

inline constexpr std::size_t kMaxPessimismModes = 4;
inline constexpr std::size_t kMaxPessimismCombinations = 2'000'000;
inline constexpr double kMaxPolicySearchSize = 1e5;

struct PessimismResult {
  double value = 0.0;
  /// Grid candidates retained per stage after intersecting with the ellipsoid.
  std::vector<std::size_t> candidates;
  /// Stages whose intersection was empty and fell back to theta_proj.
  std::vector<std::size_t> fallback_stages;
  /// The minimising nominal weights.
  MixtureWeights argmin;
};

/// min over per-stage grid weights inside {||theta - theta_hat_h||_gram <= beta_h}
/// of the robust value of `policy` at `initial_state`. d <= 4.
PessimismResult double_pessimism_value(const BasisModes& modes, const RewardTable& rewards,
                                       std::size_t initial_state,
                                       const std::vector<RidgeEstimate>& estimates,
                                       const UncertaintySpec& spec, const Policy& policy,
                                       double grid_resolution);

/// Same, fitting transition-targeted estimates (lambda = d unless set) and
/// radii from `config` first.
PessimismResult double_pessimism_value(const BasisModes& modes, const RewardTable& rewards,
                                       std::size_t initial_state, const OfflineDataset& data,
                                       const TrainConfig& config, const Policy& policy,
                                       double grid_resolution);

struct PolicySearchResult {
  Policy policy;
  double value = 0.0;
  std::size_t policies_evaluated = 0;
};

/// argmax over all deterministic policies of the doubly pessimistic value.
/// Only for |A|^(S*H) <= 1e5; throws std::invalid_argument otherwise.
PolicySearchResult pessimistic_policy_search(const BasisModes& modes, const RewardTable& rewards,
                                             std::size_t initial_state,
                                             const std::vector<RidgeEstimate>& estimates,
                                             const UncertaintySpec& spec, double grid_resolution);

}  // namespace lmdr
