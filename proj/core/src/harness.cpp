#include "lmdr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lmdr/rng.hpp"
#include "lmdr/simulate.hpp"

namespace lmdr {

namespace {

enum State : std::size_t { x1 = 0, x2 = 1, x3 = 2, x4 = 3, x5 = 4 };

}  // namespace

std::vector<double> ExperimentConfig::default_q_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

void ExperimentConfig::validate() const {
  if (!(delta >= 0.0 && xi_norm >= 0.0)) throw std::invalid_argument("config: delta and xi_norm must be >= 0");
  if (delta + xi_norm > 1.0) throw std::invalid_argument("config: delta + xi_norm <= 1 violated");
  if (delta - xi_norm < 0.0) throw std::invalid_argument("config: delta - xi_norm >= 0 violated");
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("config: 0 <= p <= 1/2 violated");
  if (!(rho_tv >= 0.0 && rho_kl > 0.0 && rho_chi2 >= 0.0))
    throw std::invalid_argument("config: radii must be >= 0 (rho_kl > 0)");
  if (K == 0) throw std::invalid_argument("config: K >= 1 violated");
  if (episodes == 0) throw std::invalid_argument("config: episodes >= 1 violated");
  if (replications == 0) throw std::invalid_argument("config: replications >= 1 violated");
  if (q_grid.empty()) throw std::invalid_argument("config: q_grid must not be empty");
  for (double q : q_grid)
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("config: q_grid must lie in [0,1]");
}

double xi_dot_action(const ExperimentConfig& config, std::size_t action) {
  if (action >= kStudyActions) throw std::out_of_range("action index out of range");
  int sum = 0;
  for (int k = 0; k < 4; ++k) sum += (action >> k) & 1U ? 1 : -1;
  return config.xi_norm / 4.0 * sum;
}

MixtureMDP build_source_env(const ExperimentConfig& config) {
  config.validate();
  constexpr std::size_t S = kStudyStates, A = kStudyActions, d = kStudyModes, H = kStudyHorizon;
  std::vector<double> phi(d * S * A * S, 0.0);
  auto set = [&](std::size_t i, std::size_t s, std::size_t a, std::size_t next, double p) {
    phi[((i * S + s) * A + a) * S + next] = p;
  };
  std::vector<double> rewards(H * S * A, 0.0);

  for (std::size_t a = 0; a < A; ++a) {
    const double success = std::clamp(config.delta + xi_dot_action(config, a), 0.0, 1.0);
    const double fail = 1.0 - success;

    set(0, x1, a, x2, fail), set(0, x1, a, x4, success);
    set(1, x1, a, x2, fail), set(1, x1, a, x5, success);
    set(2, x1, a, x4, fail), set(2, x1, a, x5, success);

    set(0, x2, a, x3, fail), set(0, x2, a, x4, success);
    set(1, x2, a, x3, fail), set(1, x2, a, x5, success);
    set(2, x2, a, x4, fail), set(2, x2, a, x5, success);

    for (std::size_t i = 0; i < d; ++i) {
      set(i, x3, a, x4, fail), set(i, x3, a, x5, success);
      set(i, x4, a, x4, 1.0);
      set(i, x5, a, x5, 1.0);
    }

    // r_h(s,a) = psi(s,a)^T nu_h with nu_1 = 0 and nu_2 = nu_3 = e_4
    for (std::size_t h = 1; h < H; ++h) {
      for (std::size_t s : {x1, x2, x3}) rewards[(h * S + s) * A + a] = success;
      rewards[(h * S + x5) * A + a] = 1.0;
    }
  }

  const std::vector<double> theta_rest{0.0, 1.0 - config.p, config.p};
  const std::vector<double> theta_first = config.theta1_variant == NominalVariant::A
                                              ? theta_rest
                                              : std::vector<double>{config.p, 1.0 - 2.0 * config.p, config.p};
  return MixtureMDP(BasisModes(d, S, A, std::move(phi)), {theta_first, theta_rest, theta_rest},
                    RewardTable(H, S, A, std::move(rewards)), x1);
}

MixtureMDP build_target_env(const MixtureMDP& source, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("target env: q must lie in [0,1]");
  if (source.num_modes() != kStudyModes) throw std::invalid_argument("target env: source must have d = 3");
  return source.with_stage_weights(0, {q, 1.0 - q, 0.0});
}

OfflineDataset collect_dataset(const MixtureMDP& env, std::size_t num_trajectories, std::uint64_t seed) {
  OfflineDataset data(env.horizon());
  for (std::size_t k = 0; k < num_trajectories; ++k) {
    const auto episode = simulate_uniform_episode(env, derive_seed(seed, {k}));
    std::vector<Transition> traj;
    traj.reserve(episode.size());
    for (const auto& step : episode) traj.push_back({step.state, step.action, step.next_state});
    data.add(std::move(traj));
  }
  return data;
}

std::vector<SweepMethod> sweep_methods(const ExperimentConfig& config) {
  std::vector<SweepMethod> out;
  for (Estimator est : {Estimator::TTR, Estimator::VTR}) {
    const std::string base = est == Estimator::TTR ? "TTR" : "VTR";
    TrainConfig plain;
    plain.estimator = est;
    out.push_back({base, plain});
    const std::pair<Divergence, double> radii[] = {
        {Divergence::TV, config.rho_tv}, {Divergence::KL, config.rho_kl}, {Divergence::Chi2, config.rho_chi2}};
    for (const auto& [div, rho] : radii) {
      TrainConfig robust;
      robust.estimator = est;
      robust.uncertainty = {div, rho};
      const std::string suffix = div == Divergence::TV ? "TV" : div == Divergence::KL ? "KL" : "chi2";
      out.push_back({"DR" + base + "-" + suffix, robust});
    }
  }
  return out;
}

const SummaryRow& ResultTable::find(const std::string& method, double q) const {
  for (const auto& row : summary)
    if (row.method == method && std::abs(row.q - q) < 1e-12) return row;
  throw std::out_of_range("result table: no summary for " + method);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  // Keep first-seen method order, then ascending q.
  std::vector<std::string> methods;
  std::map<std::pair<std::size_t, double>, std::vector<double>> groups;
  for (const auto& r : rows) {
    auto it = std::find(methods.begin(), methods.end(), r.method);
    const std::size_t idx = static_cast<std::size_t>(it - methods.begin());
    if (it == methods.end()) methods.push_back(r.method);
    groups[{idx, r.q}].push_back(r.avg_reward);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double x : values) mean += x;
    mean /= n;
    double se = 0.0;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double x : values) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / (n - 1.0) / n);
    }
    out.push_back({methods[key.first], key.second, mean, se});
  }
  return out;
}

ResultTable run_sweep(const ExperimentConfig& config) {
  config.validate();
  const MixtureMDP source = build_source_env(config);
  std::vector<MixtureMDP> targets;
  for (double q : config.q_grid) targets.push_back(build_target_env(source, q));
  const auto methods = sweep_methods(config);

  ResultTable table;
  for (std::size_t r = 0; r < config.replications; ++r) {
    const auto data = collect_dataset(source, config.K, derive_seed(config.base_seed, {kDatasetStream, r}));
    // same evaluation episodes for every method and q within a replication
    const std::uint64_t eval_seed = derive_seed(config.base_seed, {kEvaluationStream, r});
    for (const auto& method : methods) {
      const auto trained = train(source.modes(), source.rewards(), data, method.config);
      for (std::size_t qi = 0; qi < targets.size(); ++qi) {
        const auto est = evaluate_policy_mc(targets[qi], trained.policy, config.episodes, eval_seed);
        table.rows.push_back({method.name, config.q_grid[qi], r, est.mean});
      }
    }
  }
  // rows in (method, q, replication) order
  std::vector<std::string> order;
  for (const auto& m : methods) order.push_back(m.name);
  std::stable_sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    const auto ia = std::find(order.begin(), order.end(), a.method) - order.begin();
    const auto ib = std::find(order.begin(), order.end(), b.method) - order.begin();
    if (ia != ib) return ia < ib;
    if (a.q != b.q) return a.q < b.q;
    return a.replication < b.replication;
  });
  table.summary = summarize(table.rows);
  return table;
}

}  // namespace lmdr
