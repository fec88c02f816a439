#pragma once

// Ridge estimators of the per-stage mixture weights from offline data.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "lmdr/mdp.hpp"

namespace lmdr {

struct Transition {
  std::size_t state;
  std::size_t action;
  std::size_t next_state;
};

/// K trajectories, each with exactly `horizon` transitions.
class OfflineDataset {
 public:
  explicit OfflineDataset(std::size_t horizon) : horizon_(horizon) {}

  /// Throws std::invalid_argument unless the trajectory has H transitions.
  void add(std::vector<Transition> trajectory);

  std::size_t horizon() const { return horizon_; }
  std::size_t size() const { return trajectories_.size(); }
  bool empty() const { return trajectories_.empty(); }
  const std::vector<Transition>& trajectory(std::size_t k) const { return trajectories_[k]; }
  const Transition& at(std::size_t k, std::size_t h) const { return trajectories_[k][h]; }

  /// Index ranges plus the feasibility of every observed next state.
  void validate(const BasisModes& modes) const;

 private:
  std::size_t horizon_;
  std::vector<std::vector<Transition>> trajectories_;
};

struct RidgeEstimate {
  Eigen::VectorXd theta_hat;       ///< raw ridge solution
  std::vector<double> theta_proj;  ///< Euclidean projection onto the simplex
  Eigen::MatrixXd gram;            ///< Lambda_h, includes lambda_reg * I
  Eigen::VectorXd target;          ///< b_h
  double beta = 0.0;               ///< confidence radius; 0 until assigned
  double lambda_reg = 0.0;
};

/// Next states reachable under some mode: {s' : phi_i(s'|s,a) > 0 for some i}.
std::vector<std::size_t> feasible_set(const BasisModes& modes, std::size_t s, std::size_t a);

/// Transition-targeted ridge regression for stage h:
///   gram = sum_k sum_{s' feasible} phi(s'|s_k,a_k) phi(s'|s_k,a_k)^T + lambda I
///   target = sum_k phi(s'_k|s_k,a_k)
RidgeEstimate fit_transition_targeted(const BasisModes& modes, const OfflineDataset& data,
                                      std::size_t h, double lambda_reg);

/// Value-targeted ridge regression for stage h with features phi^V(s_k,a_k)
/// and responses V(s'_k).
RidgeEstimate fit_value_targeted(const BasisModes& modes, const OfflineDataset& data, std::size_t h,
                                 std::span<const double> v_next, double lambda_reg);

/// 5/4 sqrt(l) + 2/sqrt(l) (2 log(H/zeta) + d log(4 + 4 ceil(1/p_min) K / (l d)))
double confidence_radius(double lambda_reg, std::size_t d, std::size_t horizon, double zeta,
                         double p_min, std::size_t num_trajectories);

/// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_simplex(std::span<const double> x);

/// ||theta - theta_hat||_gram
double confidence_distance(const RidgeEstimate& estimate, std::span<const double> theta);

/// True iff theta lies in the ellipsoid {||theta - theta_hat||_gram <= beta}.
bool confidence_set_contains(const RidgeEstimate& estimate, std::span<const double> theta);

}  // namespace lmdr
