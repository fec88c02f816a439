#include "lmdr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lmdr/rng.hpp"
#include "lmdr/robust_vi.hpp"
#include "lmdr/simplex_grid.hpp"

namespace lmdr {

namespace {

// Grid points whose divergence exceeds rho by rounding noise only still count.
constexpr double kBallSlack = 1e-12;

void require_small(std::size_t d, const char* who) {
  if (d == 0 || d > kMaxOracleModes)
    throw std::invalid_argument(std::string(who) + ": d = " + std::to_string(d) +
                                " is outside the brute-force range [1, 4]");
}

void require_step(double step, const char* who) {
  if (!(step > 0.0 && step <= 0.05))
    throw std::invalid_argument(std::string(who) + ": grid step must lie in (0, 0.05]");
}

}  // namespace

double tv_distance(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return acc;
}

double chi2_divergence(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] <= 0.0) {
      if (p[i] > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = p[i] - q[i];
    acc += diff * diff / q[i];
  }
  return acc;
}

double divergence(Divergence kind, std::span<const double> p, std::span<const double> q) {
  switch (kind) {
    case Divergence::TV: return tv_distance(p, q);
    case Divergence::KL: return kl_divergence(p, q);
    case Divergence::Chi2: return chi2_divergence(p, q);
  }
  throw std::invalid_argument("divergence: unknown kind");
}

double PrimalResult::snap_tolerance(std::span<const double> v) const {
  double vabs = 0.0;
  for (double x : v) vabs = std::max(vabs, std::abs(x));
  return vabs * grid_step * static_cast<double>(v.size());
}

PrimalResult primal_worst_case(const UncertaintySpec& spec, std::span<const double> theta0,
                               std::span<const double> v, double grid_step) {
  spec.validate();
  const std::size_t d = theta0.size();
  require_small(d, "primal worst case");
  require_step(grid_step, "primal worst case");
  if (v.size() != d) throw std::invalid_argument("primal worst case: dimension mismatch");

  // KL and chi2 put infinite divergence on any theta leaving supp(theta0), so
  // their grid only needs to cover the support's face of the simplex.
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < d; ++i)
    if (spec.divergence == Divergence::TV || theta0[i] > 0.0) coords.push_back(i);

  PrimalResult out;
  out.grid_step = grid_step;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<double> theta(d, 0.0);
  for_each_simplex_point(coords.size(), grid_divisions(grid_step), [&](const std::vector<double>& face) {
    for (std::size_t j = 0; j < coords.size(); ++j) theta[coords[j]] = face[j];
    const double val = nominal_expectation(theta, v);
    // only candidates that would improve need the ball test
    if (!(val < out.value)) return;
    if (divergence(spec.divergence, theta, theta0) > spec.rho + kBallSlack) return;
    ++out.feasible_points;
    out.value = val;
    out.argmin = theta;
  });
  if (out.feasible_points == 0) {
    out.value = nominal_expectation(theta0, v);
    out.argmin.assign(theta0.begin(), theta0.end());
  }
  return out;
}

PlanResult exact_robust_vi(const MixtureMDP& mdp, const UncertaintySpec& spec) {
  const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
  ValueTables t(H, S, A);
  Policy pi = Policy::constant(H, S, 0);
  for (std::size_t h = H; h-- > 0;) {
    const auto q = robust_backup(mdp.modes(), mdp.weights()[h], spec, t.v_stage(h + 1), mdp.rewards(), h);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) t.q(h, s, a) = q[s * A + a];
      pi.at(h, s) = argmax_action(t.q_row(h, s));
      t.v(h, s) = t.q(h, s, pi(h, s));
    }
  }
  return {std::move(t), std::move(pi)};
}

namespace {

// |Q - r - inf E V_{h+1}| recomputed from scratch, no clipping.
double q_residual(const MixtureMDP& mdp, const UncertaintySpec& spec, const ValueTables& t) {
  double worst = 0.0;
  const std::size_t H = mdp.horizon();
  for (std::size_t h = 0; h < H; ++h) {
    const auto v_next = t.v_stage(h + 1);
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
      for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
        const auto phi_v = mode_values(mdp.modes(), s, a, v_next);
        const double vmax = std::max(static_cast<double>(H - h - 1), *std::max_element(phi_v.begin(), phi_v.end()));
        const double target = mdp.rewards()(h, s, a) + worst_case(spec, mdp.weights()[h], phi_v, vmax).value;
        worst = std::max(worst, std::abs(t.q(h, s, a) - target));
      }
  }
  for (std::size_t s = 0; s < mdp.num_states(); ++s) worst = std::max(worst, std::abs(t.v(H, s)));
  return worst;
}

}  // namespace

double robust_bellman_residual(const MixtureMDP& mdp, const UncertaintySpec& spec, const ValueTables& tables) {
  double worst = q_residual(mdp, spec, tables);
  for (std::size_t h = 0; h < mdp.horizon(); ++h)
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      const auto row = tables.q_row(h, s);
      worst = std::max(worst, std::abs(tables.v(h, s) - *std::max_element(row.begin(), row.end())));
    }
  return worst;
}

double robust_policy_residual(const MixtureMDP& mdp, const UncertaintySpec& spec, const Policy& policy,
                              const ValueTables& tables) {
  double worst = q_residual(mdp, spec, tables);
  for (std::size_t h = 0; h < mdp.horizon(); ++h)
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
      worst = std::max(worst, std::abs(tables.v(h, s) - tables.q(h, s, policy(h, s))));
  return worst;
}

double mixture_ball_tv_diameter(const BasisModes& modes, std::size_t s, std::size_t a,
                                std::span<const double> theta0, double rho, double grid_step) {
  const std::size_t d = modes.num_modes();
  require_small(d, "mixture ball diameter");
  require_step(grid_step, "mixture ball diameter");
  require_simplex(theta0, d, "mixture ball diameter: theta0");
  if (!(rho >= 0.0)) throw std::invalid_argument("mixture ball diameter: rho must be >= 0");
  const auto nominal = mixture_kernel(modes, theta0, s, a);
  double best = 0.0;
  for_each_simplex_point(d, grid_divisions(grid_step), [&](const std::vector<double>& theta) {
    if (tv_distance(theta, theta0) > rho + kBallSlack) return;
    best = std::max(best, tv_distance(mixture_kernel(modes, theta, s, a), nominal));
  });
  return best;
}

double onehot_block_tv_diameter(const TabularKernel& kernel, std::size_t s, std::size_t a, double rho,
                                double grid_step) {
  const std::size_t S = kernel.num_states(), A = kernel.num_actions();
  require_small(S, "one-hot block diameter");
  require_step(grid_step, "one-hot block diameter");
  if (s >= S || a >= A) throw std::out_of_range("one-hot block diameter: (s,a) out of range");
  const auto embedding = tabular_onehot_embedding(kernel);
  const auto nominal = mixture_kernel(embedding.modes, embedding.theta, s, a);
  const auto block0 = kernel.row(s, a);
  const std::size_t base = onehot_index(s, a, 0, S, A);

  std::vector<double> theta = embedding.theta;
  double best = 0.0;
  for_each_simplex_point(S, grid_divisions(grid_step), [&](const std::vector<double>& xi) {
    if (tv_distance(xi, block0) > rho + kBallSlack) return;
    std::copy(xi.begin(), xi.end(), theta.begin() + static_cast<std::ptrdiff_t>(base));
    best = std::max(best, tv_distance(mixture_kernel(embedding.modes, theta, s, a), nominal));
  });
  return best;
}

ContainmentReport containment_check(const BasisModes& modes, std::size_t s, std::size_t a,
                                    std::span<const double> theta0, double rho, std::size_t samples,
                                    std::uint64_t seed) {
  const std::size_t d = modes.num_modes();
  require_simplex(theta0, d, "containment check: theta0");
  if (!(rho >= 0.0)) throw std::invalid_argument("containment check: rho must be >= 0");
  const auto nominal = mixture_kernel(modes, theta0, s, a);

  Rng rng(seed);
  ContainmentReport report;
  std::vector<double> u(d), theta(d);
  for (std::size_t n = 0; n < samples; ++n) {
    // Direction: a vertex one time in four, otherwise a flat-Dirichlet draw.
    if (rng.index(4) == 0) {
      std::fill(u.begin(), u.end(), 0.0);
      u[rng.index(d)] = 1.0;
    } else {
      double total = 0.0;
      for (double& x : u) total += (x = rng.exponential());
      for (double& x : u) x /= total;
    }
    const double dist = tv_distance(u, theta0);
    double t = dist > 0.0 ? std::min(1.0, rho / dist) : 0.0;
    if (rng.index(2) == 0) t *= rng.uniform();  // interior half the time, boundary otherwise
    for (std::size_t i = 0; i < d; ++i) theta[i] = theta0[i] + t * (u[i] - theta0[i]);

    const double kernel_tv = tv_distance(mixture_kernel(modes, theta, s, a), nominal);
    report.max_kernel_tv = std::max(report.max_kernel_tv, kernel_tv);
    if (kernel_tv > rho + 1e-12) report.contained = false;
    ++report.samples;
  }
  return report;
}

}  // namespace lmdr
