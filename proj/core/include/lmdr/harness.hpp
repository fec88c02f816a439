#pragma once

// The five-state simulation study: source/target environments, offline data
// collection, and the train-once / evaluate-across-perturbations sweep.
//
// States x1..x5 are indices 0..4. Action j in [0, 16) encodes a in {-1,1}^4
// with a_k = +1 iff bit k of j is set, so j = 15 is the all-ones action.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lmdr/estimation.hpp"
#include "lmdr/mdp.hpp"
#include "lmdr/robust_vi.hpp"

namespace lmdr {

inline constexpr std::size_t kStudyStates = 5;
inline constexpr std::size_t kStudyActions = 16;
inline constexpr std::size_t kStudyHorizon = 3;
inline constexpr std::size_t kStudyModes = 3;

enum class NominalVariant { A, B };

struct ExperimentConfig {
  double delta = 0.4;
  double xi_norm = 0.4;  ///< ||xi||_1; each of the four entries is xi_norm / 4
  double p = 0.1;
  NominalVariant theta1_variant = NominalVariant::A;
  double rho_tv = 0.35;
  double rho_kl = 5.0;
  double rho_chi2 = 10.0;
  std::size_t K = 500;
  std::size_t episodes = 100;
  std::size_t replications = 10;
  std::vector<double> q_grid = default_q_grid();
  std::uint64_t base_seed = 0;

  /// {0, 0.05, ..., 1}
  static std::vector<double> default_q_grid();
  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// <xi, a> for action index `action`.
double xi_dot_action(const ExperimentConfig& config, std::size_t action);

MixtureMDP build_source_env(const ExperimentConfig& config);

/// Source with stage-1 weights replaced by (q, 1-q, 0).
MixtureMDP build_target_env(const MixtureMDP& source, double q);

/// K uniform-random-policy trajectories; trajectory k uses derive_seed(seed, {k}).
OfflineDataset collect_dataset(const MixtureMDP& env, std::size_t num_trajectories, std::uint64_t seed);

struct SweepMethod {
  std::string name;
  TrainConfig config;
};

/// TTR, VTR (rho = 0) and DRTTR/DRVTR for each divergence at the config radii.
std::vector<SweepMethod> sweep_methods(const ExperimentConfig& config);

struct ResultRow {
  std::string method;
  double q;
  std::size_t replication;
  double avg_reward;
};

struct SummaryRow {
  std::string method;
  double q;
  double mean;
  double stderr_;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;

  /// Summary entry for (method, q); throws std::out_of_range if absent.
  const SummaryRow& find(const std::string& method, double q) const;
};

/// Named substreams of the base seed.
inline constexpr std::uint64_t kDatasetStream = 1;
inline constexpr std::uint64_t kEvaluationStream = 2;

/// For each replication: collect a dataset, train every sweep method once,
/// and evaluate each policy on every target q with `episodes` episodes.
ResultTable run_sweep(const ExperimentConfig& config);

/// Aggregates rows into per-(method, q) mean and standard error over replications.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

}  // namespace lmdr
