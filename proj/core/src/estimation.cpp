#include "lmdr/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace lmdr {

void OfflineDataset::add(std::vector<Transition> trajectory) {
  if (trajectory.size() != horizon_)
    throw std::invalid_argument("dataset: trajectory must have exactly H = " + std::to_string(horizon_) +
                                " transitions, got " + std::to_string(trajectory.size()));
  trajectories_.push_back(std::move(trajectory));
}

void OfflineDataset::validate(const BasisModes& modes) const {
  const std::size_t S = modes.num_states(), A = modes.num_actions();
  for (std::size_t k = 0; k < trajectories_.size(); ++k)
    for (std::size_t h = 0; h < horizon_; ++h) {
      const auto& t = trajectories_[k][h];
      if (t.state >= S || t.next_state >= S || t.action >= A)
        throw std::invalid_argument("dataset: index out of range in trajectory " + std::to_string(k) +
                                    ", stage " + std::to_string(h));
      bool feasible = false;
      for (std::size_t i = 0; i < modes.num_modes() && !feasible; ++i)
        feasible = modes.prob(i, t.state, t.action, t.next_state) > 0.0;
      if (!feasible)
        throw std::invalid_argument("dataset: next state outside the feasible set in trajectory " +
                                    std::to_string(k) + ", stage " + std::to_string(h));
    }
}

std::vector<std::size_t> feasible_set(const BasisModes& modes, std::size_t s, std::size_t a) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < modes.num_states(); ++n)
    for (std::size_t i = 0; i < modes.num_modes(); ++i)
      if (modes.prob(i, s, a, n) > 0.0) {
        out.push_back(n);
        break;
      }
  return out;
}

namespace {

void check_lambda(double lambda_reg) {
  if (!(lambda_reg > 0.0) || !std::isfinite(lambda_reg))
    throw std::invalid_argument("ridge regression: lambda_reg must be > 0");
}

void solve(RidgeEstimate& est) {
  Eigen::LLT<Eigen::MatrixXd> llt(est.gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("ridge regression: Gram matrix is not positive definite");
  est.theta_hat = llt.solve(est.target);
  std::vector<double> raw(est.theta_hat.data(), est.theta_hat.data() + est.theta_hat.size());
  est.theta_proj = project_simplex(raw);
}

}  // namespace

RidgeEstimate fit_transition_targeted(const BasisModes& modes, const OfflineDataset& data,
                                      std::size_t h, double lambda_reg) {
  check_lambda(lambda_reg);
  if (h >= data.horizon()) throw std::out_of_range("ridge regression: stage out of range");
  const auto d = static_cast<Eigen::Index>(modes.num_modes());
  RidgeEstimate est;
  est.lambda_reg = lambda_reg;
  est.gram = lambda_reg * Eigen::MatrixXd::Identity(d, d);
  est.target = Eigen::VectorXd::Zero(d);

  Eigen::VectorXd f(d);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& t = data.at(k, h);
    const auto support = feasible_set(modes, t.state, t.action);
    if (std::find(support.begin(), support.end(), t.next_state) == support.end())
      throw std::invalid_argument("transition-targeted regression: observed next state is outside the feasible set");
    for (std::size_t n : support) {
      for (Eigen::Index i = 0; i < d; ++i) f[i] = modes.prob(static_cast<std::size_t>(i), t.state, t.action, n);
      est.gram.selfadjointView<Eigen::Lower>().rankUpdate(f);
      if (n == t.next_state) est.target += f;
    }
  }
  est.gram = est.gram.selfadjointView<Eigen::Lower>();
  solve(est);
  return est;
}

RidgeEstimate fit_value_targeted(const BasisModes& modes, const OfflineDataset& data, std::size_t h,
                                 std::span<const double> v_next, double lambda_reg) {
  check_lambda(lambda_reg);
  if (h >= data.horizon()) throw std::out_of_range("ridge regression: stage out of range");
  if (v_next.size() != modes.num_states())
    throw std::invalid_argument("value-targeted regression: value vector must have one entry per state");
  const auto d = static_cast<Eigen::Index>(modes.num_modes());
  RidgeEstimate est;
  est.lambda_reg = lambda_reg;
  est.gram = lambda_reg * Eigen::MatrixXd::Identity(d, d);
  est.target = Eigen::VectorXd::Zero(d);

  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& t = data.at(k, h);
    const auto phi_v = mode_values(modes, t.state, t.action, v_next);
    const Eigen::Map<const Eigen::VectorXd> f(phi_v.data(), d);
    est.gram.selfadjointView<Eigen::Lower>().rankUpdate(f);
    est.target += f * v_next[t.next_state];
  }
  est.gram = est.gram.selfadjointView<Eigen::Lower>();
  solve(est);
  return est;
}

double confidence_radius(double lambda_reg, std::size_t d, std::size_t horizon, double zeta,
                         double p_min, std::size_t num_trajectories) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("confidence radius: zeta must lie in (0,1)");
  if (!(lambda_reg > 0.0)) throw std::invalid_argument("confidence radius: lambda_reg must be > 0");
  if (!(p_min > 0.0)) throw std::invalid_argument("confidence radius: p_min must be > 0");
  if (d == 0 || horizon == 0) throw std::invalid_argument("confidence radius: d and H must be positive");
  const double l = lambda_reg;
  const double dd = static_cast<double>(d);
  const double cover = std::ceil(1.0 / p_min);
  const double inner = 2.0 * std::log(static_cast<double>(horizon) / zeta) +
                       dd * std::log(4.0 + 4.0 * cover * static_cast<double>(num_trajectories) / (l * dd));
  return 1.25 * std::sqrt(l) + 2.0 / std::sqrt(l) * inner;
}

std::vector<double> project_simplex(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("simplex projection: empty vector");
  for (double xi : x)
    if (!std::isfinite(xi)) throw std::invalid_argument("simplex projection: non-finite entry");
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - tau, 0.0);
  return out;
}

double confidence_distance(const RidgeEstimate& estimate, std::span<const double> theta) {
  if (static_cast<Eigen::Index>(theta.size()) != estimate.theta_hat.size())
    throw std::invalid_argument("confidence set: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> t(theta.data(), estimate.theta_hat.size());
  const Eigen::VectorXd diff = t - estimate.theta_hat;
  return std::sqrt(std::max(0.0, diff.dot(estimate.gram * diff)));
}

bool confidence_set_contains(const RidgeEstimate& estimate, std::span<const double> theta) {
  return confidence_distance(estimate, theta) <= estimate.beta;
}

}  // namespace lmdr
