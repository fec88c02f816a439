#include "lmdr/robust_vi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lmdr/simplex_grid.hpp"

namespace lmdr {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::TTR: return "ttr";
    case Estimator::VTR: return "vtr";
    case Estimator::TrueTheta: return "true";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ttr") return Estimator::TTR;
  if (lower == "vtr") return Estimator::VTR;
  if (lower == "true" || lower == "true_theta") return Estimator::TrueTheta;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected ttr, vtr or true)");
}

void TrainConfig::validate() const {
  uncertainty.validate();
  if (lambda_reg && !(*lambda_reg > 0.0)) throw std::invalid_argument("train config: lambda_reg must be > 0");
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("train config: zeta must lie in (0,1)");
  if (!(p_min > 0.0)) throw std::invalid_argument("train config: p_min must be > 0");
}

namespace {

double remaining_ceiling(std::size_t horizon, std::size_t h) { return static_cast<double>(horizon - h - 1); }

double backup_entry(const BasisModes& modes, std::span<const double> theta, const UncertaintySpec& spec,
                    std::span<const double> v_next, double reward, std::size_t s, std::size_t a,
                    double vmax, bool value_clip) {
  const auto phi_v = mode_values(modes, s, a, v_next);
  const double ceiling = std::max(vmax, *std::max_element(phi_v.begin(), phi_v.end()));
  double q = reward + worst_case(spec, theta, phi_v, ceiling).value;
  if (value_clip) q = std::clamp(q, 0.0, vmax + 1.0);
  return q;
}

}  // namespace

std::vector<double> robust_backup(const BasisModes& modes, std::span<const double> theta,
                                  const UncertaintySpec& spec, std::span<const double> v_next,
                                  const RewardTable& rewards, std::size_t h, bool value_clip) {
  if (h >= rewards.horizon()) throw std::out_of_range("robust backup: stage out of range");
  const std::size_t S = modes.num_states(), A = modes.num_actions();
  const double vmax = remaining_ceiling(rewards.horizon(), h);
  std::vector<double> q(S * A);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t a = 0; a < A; ++a)
      q[s * A + a] = backup_entry(modes, theta, spec, v_next, rewards(h, s, a), s, a, vmax, value_clip);
  return q;
}

TrainResult train(const BasisModes& modes, const RewardTable& rewards, const OfflineDataset& data,
                  const TrainConfig& config, const MixtureWeights* true_theta) {
  config.validate();
  const std::size_t H = rewards.horizon(), S = modes.num_states(), A = modes.num_actions();
  const std::size_t d = modes.num_modes();
  if (rewards.num_states() != S || rewards.num_actions() != A)
    throw std::invalid_argument("train: reward table shape does not match basis modes");
  if (config.estimator != Estimator::TrueTheta && data.horizon() != H)
    throw std::invalid_argument("train: dataset horizon does not match the reward table");
  if (config.estimator == Estimator::TrueTheta) {
    if (!true_theta) throw std::invalid_argument("train: estimator 'true' needs the true weights");
    if (true_theta->size() != H) throw std::invalid_argument("train: need one true weight vector per stage");
    for (const auto& t : *true_theta) require_simplex(t, d, "true weights");
  }

  const double lambda = config.resolved_lambda(d);
  const double beta = confidence_radius(lambda, d, H, config.zeta, config.p_min, data.size());

  TrainResult out;
  out.tables = ValueTables(H, S, A);
  out.policy = Policy::constant(H, S, 0);
  out.nominal.assign(H, {});

  if (config.estimator == Estimator::TTR) {
    // transition targets do not depend on values: fit every stage up front
    out.estimates.reserve(H);
    for (std::size_t h = 0; h < H; ++h) {
      out.estimates.push_back(fit_transition_targeted(modes, data, h, lambda));
      out.estimates.back().beta = beta;
    }
  } else if (config.estimator == Estimator::VTR) {
    out.estimates.resize(H);
  }

  for (std::size_t h = H; h-- > 0;) {
    const std::span<const double> v_next = out.tables.v_stage(h + 1);
    switch (config.estimator) {
      case Estimator::TTR: out.nominal[h] = out.estimates[h].theta_proj; break;
      case Estimator::VTR:
        out.estimates[h] = fit_value_targeted(modes, data, h, v_next, lambda);
        out.estimates[h].beta = beta;
        out.nominal[h] = out.estimates[h].theta_proj;
        break;
      case Estimator::TrueTheta: out.nominal[h] = (*true_theta)[h]; break;
    }
    const auto q = robust_backup(modes, out.nominal[h], config.uncertainty, v_next, rewards, h,
                                 config.value_clip);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) out.tables.q(h, s, a) = q[s * A + a];
      out.policy.at(h, s) = argmax_action(out.tables.q_row(h, s));
      out.tables.v(h, s) = out.tables.q(h, s, out.policy(h, s));
    }
  }
  return out;
}

ValueTables robust_policy_evaluation(const BasisModes& modes, const RewardTable& rewards,
                                     const MixtureWeights& nominal, const UncertaintySpec& spec,
                                     const Policy& policy, bool value_clip) {
  const std::size_t H = rewards.horizon(), S = modes.num_states(), A = modes.num_actions();
  if (nominal.size() != H) throw std::invalid_argument("robust evaluation: need one weight vector per stage");
  if (policy.horizon() != H || policy.num_states() != S)
    throw std::invalid_argument("robust evaluation: policy shape mismatch");
  ValueTables t(H, S, A);
  for (std::size_t h = H; h-- > 0;) {
    const auto q = robust_backup(modes, nominal[h], spec, t.v_stage(h + 1), rewards, h, value_clip);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) t.q(h, s, a) = q[s * A + a];
      const std::size_t a = policy(h, s);
      if (a >= A) throw std::out_of_range("robust evaluation: policy action out of range");
      t.v(h, s) = t.q(h, s, a);
    }
  }
  return t;
}

namespace {

struct PessimismSearch {
  const BasisModes& modes;
  const RewardTable& rewards;
  const UncertaintySpec& spec;
  const Policy& policy;
  std::size_t initial_state;
  const std::vector<std::vector<std::vector<double>>>& candidates;

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice;
  std::vector<std::size_t> best_choice;

  // V_h under the current choice for stages h..H-1, given V_{h+1}.
  void descend(std::size_t h, const std::vector<double>& v_next) {
    const std::size_t S = modes.num_states();
    const double vmax = remaining_ceiling(rewards.horizon(), h);
    std::vector<double> v(S);
    for (std::size_t c = 0; c < candidates[h].size(); ++c) {
      const auto& theta = candidates[h][c];
      choice[h] = c;
      if (h == 0) {
        const std::size_t s = initial_state;
        const double val = backup_entry(modes, theta, spec, v_next, rewards(0, s, policy(0, s)), s,
                                        policy(0, s), vmax, true);
        if (val < best) {
          best = val;
          best_choice = choice;
        }
        continue;
      }
      for (std::size_t s = 0; s < S; ++s)
        v[s] = backup_entry(modes, theta, spec, v_next, rewards(h, s, policy(h, s)), s, policy(h, s), vmax, true);
      descend(h - 1, v);
    }
  }
};

}  // namespace

PessimismResult double_pessimism_value(const BasisModes& modes, const RewardTable& rewards,
                                       std::size_t initial_state,
                                       const std::vector<RidgeEstimate>& estimates,
                                       const UncertaintySpec& spec, const Policy& policy,
                                       double grid_resolution) {
  const std::size_t H = rewards.horizon(), d = modes.num_modes();
  if (d > kMaxPessimismModes)
    throw std::invalid_argument("double pessimism: d = " + std::to_string(d) + " exceeds the grid limit of " +
                                std::to_string(kMaxPessimismModes));
  if (!(grid_resolution > 0.0 && grid_resolution <= 0.1))
    throw std::invalid_argument("double pessimism: grid resolution must lie in (0, 0.1]");
  if (estimates.size() != H) throw std::invalid_argument("double pessimism: need one estimate per stage");
  if (policy.horizon() != H || policy.num_states() != modes.num_states())
    throw std::invalid_argument("double pessimism: policy shape mismatch");
  if (initial_state >= modes.num_states()) throw std::out_of_range("double pessimism: initial state");
  spec.validate();

  PessimismResult out;
  std::vector<std::vector<std::vector<double>>> candidates(H);
  const std::size_t n = grid_divisions(grid_resolution);
  double combos = 1.0;
  for (std::size_t h = 0; h < H; ++h) {
    for_each_simplex_point(d, n, [&](const std::vector<double>& p) {
      if (confidence_set_contains(estimates[h], p)) candidates[h].push_back(p);
    });
    if (candidates[h].empty()) {
      candidates[h].push_back(estimates[h].theta_proj);
      out.fallback_stages.push_back(h);
    }
    out.candidates.push_back(candidates[h].size());
    combos *= static_cast<double>(candidates[h].size());
  }
  if (combos > static_cast<double>(kMaxPessimismCombinations))
    throw std::invalid_argument("double pessimism: " + std::to_string(combos) +
                                " weight combinations exceed the enumeration limit; use a coarser grid");

  PessimismSearch search{modes, rewards, spec, policy, initial_state, candidates, std::numeric_limits<double>::infinity(), {}, {}};
  search.choice.assign(H, 0);
  search.descend(H - 1, std::vector<double>(modes.num_states(), 0.0));
  out.value = search.best;
  for (std::size_t h = 0; h < H; ++h) out.argmin.push_back(candidates[h][search.best_choice[h]]);
  return out;
}

PessimismResult double_pessimism_value(const BasisModes& modes, const RewardTable& rewards,
                                       std::size_t initial_state, const OfflineDataset& data,
                                       const TrainConfig& config, const Policy& policy,
                                       double grid_resolution) {
  config.validate();
  const std::size_t H = rewards.horizon(), d = modes.num_modes();
  const double lambda = config.resolved_lambda(d);
  const double beta = confidence_radius(lambda, d, H, config.zeta, config.p_min, data.size());
  std::vector<RidgeEstimate> estimates;
  for (std::size_t h = 0; h < H; ++h) {
    estimates.push_back(fit_transition_targeted(modes, data, h, lambda));
    estimates.back().beta = beta;
  }
  return double_pessimism_value(modes, rewards, initial_state, estimates, config.uncertainty, policy,
                                grid_resolution);
}

PolicySearchResult pessimistic_policy_search(const BasisModes& modes, const RewardTable& rewards,
                                             std::size_t initial_state,
                                             const std::vector<RidgeEstimate>& estimates,
                                             const UncertaintySpec& spec, double grid_resolution) {
  const std::size_t H = rewards.horizon(), S = modes.num_states(), A = modes.num_actions();
  const double count = std::pow(static_cast<double>(A), static_cast<double>(S * H));
  if (count > kMaxPolicySearchSize)
    throw std::invalid_argument("policy search: |A|^(S*H) = " + std::to_string(count) +
                                " exceeds the enumeration limit of 1e5");
  std::vector<std::size_t> digits(S * H, 0);
  PolicySearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (;;) {
    Policy pi(H, S, digits);
    const double val = double_pessimism_value(modes, rewards, initial_state, estimates, spec, pi,
                                              grid_resolution).value;
    ++best.policies_evaluated;
    if (val > best.value) {
      best.value = val;
      best.policy = pi;
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == A) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return best;
}

}  // namespace lmdr
