#include "lmdr/duals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lmdr {

namespace {

constexpr double kWeightTol = 1e-9;

void check_inputs(std::span<const double> theta0, std::span<const double> v, const char* who) {
  if (theta0.size() != v.size() || theta0.empty())
    throw std::invalid_argument(std::string(who) + ": theta0 and v must have the same positive size");
  double total = 0.0;
  for (double t : theta0) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": theta0 has a negative entry");
    total += t;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw std::invalid_argument(std::string(who) + ": theta0 is not on the simplex");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite value");
}

void check_rho(double rho, const char* who) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::invalid_argument(std::string(who) + ": rho must be a finite value >= 0");
}

// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

double min_entry(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

std::string_view to_string(Divergence d) {
  switch (d) {
    case Divergence::TV: return "tv";
    case Divergence::KL: return "kl";
    case Divergence::Chi2: return "chi2";
  }
  return "?";
}

Divergence parse_divergence(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "tv") return Divergence::TV;
  if (lower == "kl") return Divergence::KL;
  if (lower == "chi2" || lower == "chi-square" || lower == "chi_square") return Divergence::Chi2;
  throw std::invalid_argument("unknown divergence '" + std::string(name) + "' (expected tv, kl or chi2)");
}

void UncertaintySpec::validate() const { check_rho(rho, "uncertainty spec"); }

double nominal_expectation(std::span<const double> theta, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) acc += theta[i] * v[i];
  return acc;
}

DualResult tv_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                         double vmax) {
  check_inputs(theta0, v, "tv dual");
  check_rho(rho, "tv dual");
  const double vmin = min_entry(v);
  auto objective = [&](double alpha) {
    double e = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) e += theta0[i] * std::min(v[i], alpha);
    return e - rho * (alpha - std::min(vmin, alpha));
  };
  const double hi = std::max(vmax, 0.0);
  DualResult best{objective(0.0), 0.0, true};
  auto consider = [&](double alpha) {
    if (alpha < 0.0 || alpha > hi) return;
    const double f = objective(alpha);
    if (f > best.value) best = {f, alpha, true};
  };
  consider(hi);
  for (double x : v) consider(x);
  return best;
}

DualResult kl_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                         double vmax) {
  if (theta0.size() != v.size() || theta0.empty())
    throw std::invalid_argument("kl dual: theta0 and v must have the same positive size");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("kl dual: rho must be > 0");

  // Restrict to the support of theta0 and renormalise.
  std::vector<double> w, x;
  double mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(theta0[i] >= 0.0)) throw std::invalid_argument("kl dual: theta0 has a negative entry");
    if (!std::isfinite(v[i])) throw std::invalid_argument("kl dual: non-finite value");
    if (theta0[i] > 0.0) {
      w.push_back(theta0[i]);
      x.push_back(v[i]);
      mass += theta0[i];
    }
  }
  if (!(mass > 0.0)) throw std::invalid_argument("kl dual: theta0 has zero total mass");
  for (double& wi : w) wi /= mass;

  const double m = *std::min_element(x.begin(), x.end());
  // log-sum-exp shifted by the minimum so every exponent is <= 0
  auto objective = [&](double lambda) {
    if (lambda <= 0.0) return m;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::exp(-(x[i] - m) / lambda);
    return m - lambda * std::log(acc) - lambda * rho;
  };

  const double hi = std::max(vmax, 0.0) / rho;
  DualResult best{m, 0.0, false};
  if (hi > 0.0) {
    const auto [lam, f] = golden_section_max(objective, 0.0, hi, kDualSearchTol);
    if (f > best.value) best = {f, lam, false};
    const double f_hi = objective(hi);
    if (f_hi > best.value) best = {f_hi, hi, false};
  }
  return best;
}

DualResult chi2_worst_case(std::span<const double> theta0, std::span<const double> v, double rho,
                           double vmax) {
  check_inputs(theta0, v, "chi2 dual");
  check_rho(rho, "chi2 dual");
  double mass = 0.0;
  for (double t : theta0) mass += t;

  auto objective = [&](double alpha) {
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += theta0[i] * std::min(v[i], alpha);
    mean /= mass;
    double var = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double dev = std::min(v[i], alpha) - mean;
      var += theta0[i] * dev * dev;
    }
    var /= mass;
    return mean - std::sqrt(rho * var);
  };

  const double hi = std::max(vmax, 0.0);
  DualResult best{objective(0.0), 0.0, false};
  if (hi == 0.0) return best;

  const double step = hi / kChi2GridCells;
  for (int k = 1; k <= kChi2GridCells; ++k) {
    const double alpha = k == kChi2GridCells ? hi : k * step;
    const double f = objective(alpha);
    if (f > best.value) best = {f, alpha, false};
  }
  // Breakpoints, where the per-segment concave pieces meet.
  for (double x : v) {
    if (x < 0.0 || x > hi) continue;
    const double f = objective(x);
    if (f > best.value) best = {f, x, false};
  }
  const double lo_cell = std::max(0.0, best.dual_argmax - step);
  const double hi_cell = std::min(hi, best.dual_argmax + step);
  const auto [alpha, f] = golden_section_max(objective, lo_cell, hi_cell, kDualSearchTol);
  if (f > best.value) best = {f, alpha, false};
  return best;
}

DualResult worst_case(const UncertaintySpec& spec, std::span<const double> theta0,
                      std::span<const double> v, double vmax) {
  spec.validate();
  if (spec.rho == 0.0) {
    check_inputs(theta0, v, "worst case");
    return {nominal_expectation(theta0, v), std::max(vmax, 0.0), true};
  }
  switch (spec.divergence) {
    case Divergence::TV: return tv_worst_case(theta0, v, spec.rho, vmax);
    case Divergence::KL: return kl_worst_case(theta0, v, spec.rho, vmax);
    case Divergence::Chi2: return chi2_worst_case(theta0, v, spec.rho, vmax);
  }
  throw std::invalid_argument("worst case: unknown divergence");
}

}  // namespace lmdr
