#include <gtest/gtest.h>

#include <algorithm>
#include <ostream>

#include "fixtures.hpp"
#include "lmdr/duals.hpp"
#include "lmdr/rng.hpp"

namespace lmdr {
void PrintTo(Divergence d, std::ostream* os) { *os << to_string(d); }
}  // namespace lmdr

using namespace lmdr;
using Vec = std::vector<double>;

namespace {

struct Instance {
  Vec theta0;
  Vec v;
  double vmax;
};

// theta0 with full support, v in [0, vmax].
Instance draw(Rng& rng) {
  const std::size_t d = 2 + rng.index(6);
  Instance x{fixtures::dirichlet(rng, d), Vec(d), 1.0 + 3.0 * rng.uniform()};
  for (double& v : x.v) v = x.vmax * rng.uniform();
  return x;
}

double tol(Divergence div) { return div == Divergence::TV ? 1e-12 : 1e-6; }

class DualProperties : public ::testing::TestWithParam<Divergence> {};

}  // namespace

TEST_P(DualProperties, SandwichedBetweenMinimumAndNominal) {
  const auto div = GetParam();
  Rng rng(derive_seed(21, {static_cast<std::uint64_t>(div)}));
  for (int n = 0; n < 300; ++n) {
    const auto x = draw(rng);
    const double rho = 5.0 * rng.uniform();
    const double w = worst_case({div, rho}, x.theta0, x.v, x.vmax).value;
    EXPECT_LE(w, ref::dot(x.theta0, x.v) + tol(div));
    EXPECT_GE(w, *std::min_element(x.v.begin(), x.v.end()) - tol(div));
  }
}

TEST_P(DualProperties, NonIncreasingInRadius) {
  const auto div = GetParam();
  Rng rng(derive_seed(22, {static_cast<std::uint64_t>(div)}));
  for (int n = 0; n < 100; ++n) {
    const auto x = draw(rng);
    double prev = ref::dot(x.theta0, x.v);
    for (double rho : {0.01, 0.05, 0.1, 0.3, 0.7, 1.5, 4.0}) {
      const double w = worst_case({div, rho}, x.theta0, x.v, x.vmax).value;
      EXPECT_LE(w, prev + tol(div));
      prev = w;
    }
  }
}

TEST_P(DualProperties, MonotoneInValues) {
  const auto div = GetParam();
  Rng rng(derive_seed(23, {static_cast<std::uint64_t>(div)}));
  for (int n = 0; n < 200; ++n) {
    auto x = draw(rng);
    const double rho = 2.0 * rng.uniform() + 0.01;
    auto up = x.v;
    for (double& v : up) v = std::min(x.vmax, v + 0.5 * rng.uniform());
    EXPECT_LE(worst_case({div, rho}, x.theta0, x.v, x.vmax).value,
              worst_case({div, rho}, x.theta0, up, x.vmax).value + tol(div));
  }
}

TEST_P(DualProperties, TranslationEquivariant) {
  const auto div = GetParam();
  Rng rng(derive_seed(24, {static_cast<std::uint64_t>(div)}));
  for (int n = 0; n < 200; ++n) {
    auto x = draw(rng);
    const double rho = 2.0 * rng.uniform() + 0.01;
    const double c = 2.0 * rng.uniform();
    auto shifted = x.v;
    for (double& v : shifted) v += c;
    EXPECT_NEAR(worst_case({div, rho}, x.theta0, shifted, x.vmax + c).value,
                worst_case({div, rho}, x.theta0, x.v, x.vmax).value + c, 10 * tol(div));
  }
}

TEST_P(DualProperties, PermutationInvariant) {
  const auto div = GetParam();
  Rng rng(derive_seed(25, {static_cast<std::uint64_t>(div)}));
  for (int n = 0; n < 100; ++n) {
    auto x = draw(rng);
    const double rho = 2.0 * rng.uniform() + 0.01;
    const double w = worst_case({div, rho}, x.theta0, x.v, x.vmax).value;
    std::reverse(x.theta0.begin(), x.theta0.end());
    std::reverse(x.v.begin(), x.v.end());
    EXPECT_NEAR(worst_case({div, rho}, x.theta0, x.v, x.vmax).value, w, tol(div));
  }
}

INSTANTIATE_TEST_SUITE_P(AllDivergences, DualProperties,
                         ::testing::Values(Divergence::TV, Divergence::KL, Divergence::Chi2),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(TvProperties, DegenerateNominalIsPinned) {
  // a point mass can move at most rho of its weight
  const Vec theta0{0, 1, 0}, v{0.2, 1.0, 3.0};
  EXPECT_NEAR(tv_worst_case(theta0, v, 0.3, 3.0).value, 0.7 * 1.0 + 0.3 * 0.2, 1e-12);
  EXPECT_NEAR(tv_worst_case(theta0, v, 1.0, 3.0).value, 0.2, 1e-12);
}

TEST(Chi2Properties, MatchesTwoPointClosedFormAcrossRadii) {
  // theta0 = (1/2, 1/2), v = (0, 1): worst case 1/2 - sqrt(rho)/2 until it hits 0
  for (double rho : {0.04, 0.25, 0.5, 0.81, 1.0, 2.0})
    EXPECT_NEAR(chi2_worst_case(Vec{0.5, 0.5}, Vec{0.0, 1.0}, rho, 1.0).value,
                std::max(0.0, 0.5 - std::sqrt(rho) / 2), 1e-7);
}
