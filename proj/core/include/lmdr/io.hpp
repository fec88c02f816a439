#pragma once

// File formats: environment and policy JSON, experiment config JSON, dataset
// CSV (`k,h,s,a,s_next`), and the sweep's results/summary CSVs. All indices
// are 0-based. Parse errors throw std::invalid_argument with a one-line
// message naming the offending field.

#include <iosfwd>
#include <string>

#include "lmdr/estimation.hpp"
#include "lmdr/harness.hpp"
#include "lmdr/mdp.hpp"
#include "lmdr/robust_vi.hpp"

namespace lmdr {

std::string env_to_json(const MixtureMDP& mdp);
MixtureMDP env_from_json(const std::string& text);

std::string config_to_json(const ExperimentConfig& config);
/// Unknown keys are rejected; missing keys keep their defaults.
ExperimentConfig config_from_json(const std::string& text);

std::string train_config_to_json(const TrainConfig& config);

/// `policy` (H x S), `v`, `q`, `config`, per-stage `theta_hat`, `theta_proj`, `beta`.
std::string trained_policy_to_json(const TrainResult& result, const TrainConfig& config);

struct LoadedPolicy {
  Policy policy;
  TrainConfig config;
};
LoadedPolicy trained_policy_from_json(const std::string& text);

void write_dataset_csv(std::ostream& out, const OfflineDataset& data);
/// Rows may come in any order; every trajectory must cover stages 0..H-1
/// exactly once and every observed next state must be feasible under `modes`.
OfflineDataset read_dataset_csv(std::istream& in, const BasisModes& modes, std::size_t horizon);

void write_results_csv(std::ostream& out, const ResultTable& table);
void write_summary_csv(std::ostream& out, const ResultTable& table);

/// Shortest decimal that round-trips.
std::string format_double(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace lmdr
