#pragma once

// Brute-force checks on small instances: primal grid minimisation of the
// worst-case expectation, exact robust value iteration under the true
// weights, and the geometry of mixture balls versus (s,a)-rectangular balls.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lmdr/duals.hpp"
#include "lmdr/mdp.hpp"

namespace lmdr {

inline constexpr std::size_t kMaxOracleModes = 4;

/// 1/2 sum |p - q|
double tv_distance(std::span<const double> p, std::span<const double> q);
/// sum p log(p/q) with 0 log 0 = 0; +inf unless p << q.
double kl_divergence(std::span<const double> p, std::span<const double> q);
/// sum (p - q)^2 / q; +inf when p puts mass where q has none.
double chi2_divergence(std::span<const double> p, std::span<const double> q);
double divergence(Divergence kind, std::span<const double> p, std::span<const double> q);

struct PrimalResult {
  double value = 0.0;
  std::vector<double> argmin;
  double grid_step = 0.0;
  /// Feasible grid points that lowered the running minimum; 0 means none qualified.
  std::size_t feasible_points = 0;

  /// Lipschitz bound on the grid-snap error: max|v| * step * d.
  double snap_tolerance(std::span<const double> v) const;
};

/// min theta . v over the simplex grid restricted to D(theta || theta0) <= rho.
/// Falls back to theta0 . v if no grid point qualifies. d <= 4.
PrimalResult primal_worst_case(const UncertaintySpec& spec, std::span<const double> theta0,
                               std::span<const double> v, double grid_step);

/// Robust backward induction under the MDP's own weights.
PlanResult exact_robust_vi(const MixtureMDP& mdp, const UncertaintySpec& spec);

/// max over (h,s,a) of |Q - r - worst_case(V_{h+1})| and |V - max_a Q|.
double robust_bellman_residual(const MixtureMDP& mdp, const UncertaintySpec& spec,
                               const ValueTables& tables);

/// Residual of the fixed-policy equations V(s) = Q(s, pi(s)), Q = r + worst_case(V_{h+1}).
double robust_policy_residual(const MixtureMDP& mdp, const UncertaintySpec& spec, const Policy& policy,
                              const ValueTables& tables);

/// max over grid theta with TV(theta, theta0) <= rho of
/// TV(<phi(.|s,a), theta>, <phi(.|s,a), theta0>). d <= 4.
double mixture_ball_tv_diameter(const BasisModes& modes, std::size_t s, std::size_t a,
                                std::span<const double> theta0, double rho, double grid_step);

/// Kernel-space TV radius of the one-hot embedding's (s,a) block: the block
/// weights range over a grid on the S-simplex within TV rho of P(.|s,a), all
/// other blocks stay nominal, and kernels are read back through the
/// embedding's modes.
double onehot_block_tv_diameter(const TabularKernel& kernel, std::size_t s, std::size_t a, double rho,
                                double grid_step);

struct ContainmentReport {
  bool contained = true;
  double max_kernel_tv = 0.0;
  std::size_t samples = 0;
};

/// Samples weights in the TV ball around theta0 and checks that each induced
/// kernel stays within TV rho (+1e-12) of the nominal kernel.
ContainmentReport containment_check(const BasisModes& modes, std::size_t s, std::size_t a,
                                    std::span<const double> theta0, double rho, std::size_t samples,
                                    std::uint64_t seed);

}  // namespace lmdr
