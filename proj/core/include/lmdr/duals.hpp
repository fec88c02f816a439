#pragma once

// Worst-case expectations over divergence balls on the weight simplex.
//
// Each routine computes inf { sum_i theta_i v_i : theta in simplex,
// D(theta || theta0) <= rho } through its scalar dual. `v` holds the per-mode
// values phi_i^V(s,a) and `vmax` is the truncation ceiling of the dual
// variable's range (the remaining horizon in a Bellman backup).

#include <span>
#include <string>
#include <string_view>

namespace lmdr {

enum class Divergence { TV, KL, Chi2 };

std::string_view to_string(Divergence d);
/// Accepts "tv", "kl", "chi2" (case-insensitive). Throws std::invalid_argument.
Divergence parse_divergence(std::string_view name);

struct UncertaintySpec {
  Divergence divergence = Divergence::TV;
  double rho = 0.0;

  /// Throws std::invalid_argument when rho is negative or not finite.
  void validate() const;
};

struct DualResult {
  double value = 0.0;
  /// Optimal alpha (TV, chi2) or lambda (KL).
  double dual_argmax = 0.0;
  /// True when the maximisation is solved in closed form (TV).
  bool exact = false;
};

/// Absolute tolerance of the scalar dual searches.
inline constexpr double kDualSearchTol = 1e-8;
/// Grid cells used by the chi-square search before golden-section refinement.
inline constexpr int kChi2GridCells = 2000;

/// sum_i theta_i v_i
double nominal_expectation(std::span<const double> theta, std::span<const double> v);

/// max_{alpha in [0, vmax]} E[min(v, alpha)] - rho (alpha - min_i min(v_i, alpha)).
/// The objective is piecewise linear, so it is evaluated at {0, vmax, v_i}.
DualResult tv_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                         double vmax);

/// sup_{lambda in [0, vmax/rho]} -lambda log E exp(-v/lambda) - lambda rho, with
/// the lambda -> 0 limit min_{i: theta0_i > 0} v_i. Modes with zero weight are
/// outside the support and do not enter the expectation. Requires rho > 0.
DualResult kl_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                         double vmax);

/// max_{alpha in [0, vmax]} E[min(v, alpha)] - sqrt(rho Var(min(v, alpha))).
DualResult chi2_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                           double vmax);

/// Dispatch on `spec.divergence`. A zero radius returns the nominal
/// expectation for every divergence.
DualResult worst_case(const UncertaintySpec& spec, std::span<const double> theta0,
                      std::span<const double> v, double vmax);

}  // namespace lmdr
