#include "lmdr/validation.hpp"

#include <algorithm>
#include <cmath>

#include "lmdr/oracle.hpp"
#include "lmdr/rng.hpp"

namespace lmdr {

namespace {

void dirichlet_row(Rng& rng, double* out, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += (out[i] = rng.exponential());
  for (std::size_t i = 0; i < n; ++i) out[i] /= total;
}

// Uniform-ish composition of `parts` into d pieces, scaled to the simplex.
std::vector<double> grid_weights(Rng& rng, std::size_t d, std::size_t parts) {
  std::vector<std::size_t> cuts(d - 1);
  for (auto& c : cuts) c = rng.index(parts + 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> theta(d);
  std::size_t prev = 0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    theta[i] = static_cast<double>(cuts[i] - prev) / static_cast<double>(parts);
    prev = cuts[i];
  }
  theta[d - 1] = static_cast<double>(parts - prev) / static_cast<double>(parts);
  return theta;
}

}  // namespace

BasisModes random_modes(std::size_t d, std::size_t S, std::size_t A, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> probs(d * S * A * S);
  for (std::size_t r = 0; r < d * S * A; ++r) dirichlet_row(rng, probs.data() + r * S, S);
  return BasisModes(d, S, A, std::move(probs));
}

TabularKernel random_tabular_kernel(std::size_t S, std::size_t A, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> probs(S * A * S);
  for (std::size_t r = 0; r < S * A; ++r) dirichlet_row(rng, probs.data() + r * S, S);
  return TabularKernel(S, A, std::move(probs));
}

BasisModes two_mode_modes() {
  constexpr std::size_t S = 3;
  std::vector<double> probs;
  for (const auto& row : {std::vector<double>{0.7, 0.1, 0.2}, std::vector<double>{0.1, 0.7, 0.2}})
    for (std::size_t s = 0; s < S; ++s) probs.insert(probs.end(), row.begin(), row.end());
  return BasisModes(2, S, 1, std::move(probs));
}

double battery_grid_step(std::size_t d) {
  switch (d) {
    case 1:
    case 2: return 1e-4;
    case 3: return 5e-4;
    default: return 2.5e-3;
  }
}

DualGapReport dual_primal_battery(Divergence divergence, std::size_t instances, std::uint64_t seed) {
  DualGapReport report;
  report.divergence = divergence;
  const std::size_t rho_steps = divergence == Divergence::KL ? 100 : 20;
  for (std::size_t n = 0; n < instances; ++n) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(divergence), n}));
    const std::size_t d = 2 + rng.index(3);
    DualGapInstance inst;
    inst.theta0 = grid_weights(rng, d, 20);
    inst.v.resize(d);
    for (double& x : inst.v) x = 3.0 * rng.uniform();
    inst.rho = 0.05 * static_cast<double>(1 + rng.index(rho_steps));
    // the primal grid lives on supp(theta0) for KL and chi2
    std::size_t effective_d = d;
    if (divergence != Divergence::TV)
      effective_d = static_cast<std::size_t>(std::count_if(inst.theta0.begin(), inst.theta0.end(),
                                                           [](double t) { return t > 0.0; }));
    inst.grid_step = battery_grid_step(effective_d);

    const UncertaintySpec spec{divergence, inst.rho};
    const double vmax = *std::max_element(inst.v.begin(), inst.v.end());
    inst.dual = worst_case(spec, inst.theta0, inst.v, vmax).value;
    inst.primal = primal_worst_case(spec, inst.theta0, inst.v, inst.grid_step).value;
    report.max_gap = std::max(report.max_gap, std::abs(inst.dual - inst.primal));
    report.instances.push_back(std::move(inst));
  }
  return report;
}

ContainmentBatteryReport containment_battery(std::size_t instances, std::size_t samples, std::uint64_t seed) {
  ContainmentBatteryReport report;
  for (std::size_t n = 0; n < instances; ++n) {
    Rng rng(derive_seed(seed, {n}));
    const std::size_t d = 2 + rng.index(kMaxOracleModes - 1);
    const std::size_t S = 2 + rng.index(4);
    const std::size_t A = 1 + rng.index(3);
    const auto modes = random_modes(d, S, A, derive_seed(seed, {n, 1}));
    std::vector<double> theta0(d);
    dirichlet_row(rng, theta0.data(), d);
    const double rho = 1.0 - rng.uniform();  // (0, 1]
    const auto r = containment_check(modes, rng.index(S), rng.index(A), theta0, rho, samples,
                                     derive_seed(seed, {n, 2}));
    ++report.instances;
    if (!r.contained) ++report.failures;
    report.max_ratio = std::max(report.max_ratio, r.max_kernel_tv / rho);
  }
  return report;
}

}  // namespace lmdr
