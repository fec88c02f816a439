#pragma once

// Randomised check batteries shared by the command-line tool and the
// acceptance suite: dual vs primal grid, mixture-ball geometry, one-hot
// recovery.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lmdr/duals.hpp"
#include "lmdr/mdp.hpp"

namespace lmdr {

/// Random modes with every row drawn from a flat Dirichlet on the S-simplex.
BasisModes random_modes(std::size_t d, std::size_t S, std::size_t A, std::uint64_t seed);

/// Random tabular kernel with flat-Dirichlet rows.
TabularKernel random_tabular_kernel(std::size_t S, std::size_t A, std::uint64_t seed);

/// Two-mode, three-state instance with phi_1 = (.7,.1,.2), phi_2 = (.1,.7,.2)
/// at every state; theta0 = (1/2, 1/2). The induced kernel TV radius is 0.6 rho.
BasisModes two_mode_modes();

struct DualGapInstance {
  std::vector<double> theta0;
  std::vector<double> v;
  double rho = 0.0;
  double dual = 0.0;
  double primal = 0.0;
  double grid_step = 0.0;
};

struct DualGapReport {
  Divergence divergence = Divergence::TV;
  double max_gap = 0.0;
  std::vector<DualGapInstance> instances;
};

/// Grid step used by the battery for dimension d.
double battery_grid_step(std::size_t d);

/// `instances` random problems with d in {2,3,4}, v in [0,3]^d, theta0 on the
/// 1/20 grid, rho a multiple of 0.05 up to 1 (TV, chi2) or 5 (KL).
DualGapReport dual_primal_battery(Divergence divergence, std::size_t instances, std::uint64_t seed);

struct ContainmentBatteryReport {
  std::size_t instances = 0;
  std::size_t failures = 0;
  /// Largest observed TV(P, P0) / rho.
  double max_ratio = 0.0;
};

/// Random modes (d <= 4, S <= 5), theta0 and rho in (0, 1]; `samples` draws each.
ContainmentBatteryReport containment_battery(std::size_t instances, std::size_t samples, std::uint64_t seed);

}  // namespace lmdr
