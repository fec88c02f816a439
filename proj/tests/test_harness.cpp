#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lmdr/harness.hpp"
#include "lmdr/simulate.hpp"

using namespace lmdr;
using Vec = std::vector<double>;

namespace {

enum : std::size_t { x1, x2, x3, x4, x5 };
constexpr std::size_t kAllOnes = 15;

ExperimentConfig small_sweep_config() {
  ExperimentConfig c;
  c.K = 60;
  c.episodes = 40;
  c.replications = 2;
  c.q_grid = {0.0, 1.0};
  c.base_seed = 11;
  return c;
}

}  // namespace

TEST(StudyEnv, ActionEncoding) {
  const auto c = fixtures::study_config();
  EXPECT_DOUBLE_EQ(xi_dot_action(c, kAllOnes), 0.4);
  EXPECT_DOUBLE_EQ(xi_dot_action(c, 0), -0.4);
  EXPECT_DOUBLE_EQ(xi_dot_action(c, 0b0011), 0.0);
  EXPECT_DOUBLE_EQ(xi_dot_action(c, 0b0111), 0.2);
  EXPECT_THROW(xi_dot_action(c, 16), std::out_of_range);
}

TEST(StudyEnv, SourceKernelAtStart) {
  const auto env = build_source_env(fixtures::study_config());
  EXPECT_EQ(env.num_states(), 5u);
  EXPECT_EQ(env.num_actions(), 16u);
  EXPECT_EQ(env.horizon(), 3u);
  EXPECT_EQ(env.num_modes(), 3u);
  EXPECT_EQ(env.initial_state(), x1);
  const auto k = kernel(env, 0, x1, kAllOnes);
  const Vec expected{0.0, 0.18, 0.0, 0.02, 0.80};
  for (std::size_t n = 0; n < 5; ++n) EXPECT_NEAR(k[n], expected[n], 1e-15);
}

TEST(StudyEnv, SourceKernelFollowsArrowFormulas) {
  const auto c = fixtures::study_config();
  const auto env = build_source_env(c);
  for (std::size_t a = 0; a < 16; ++a) {
    const double succ = c.delta + xi_dot_action(c, a);
    const auto k = kernel(env, 0, x1, a);
    EXPECT_NEAR(k[x2], (1 - c.p) * (1 - succ), 1e-15);
    EXPECT_NEAR(k[x4], c.p * (1 - succ), 1e-15);
    EXPECT_NEAR(k[x5], succ, 1e-15);
  }
  for (std::size_t h = 0; h < 3; ++h)
    for (std::size_t a = 0; a < 16; ++a) {
      EXPECT_DOUBLE_EQ(kernel(env, h, x4, a)[x4], 1.0);
      EXPECT_DOUBLE_EQ(kernel(env, h, x5, a)[x5], 1.0);
    }
  EXPECT_EQ(env.weights()[1], (Vec{0.0, 0.9, 0.1}));
  EXPECT_EQ(env.weights()[2], (Vec{0.0, 0.9, 0.1}));
}

TEST(StudyEnv, VariantB) {
  auto c = fixtures::study_config();
  c.theta1_variant = NominalVariant::B;
  const auto env = build_source_env(c);
  EXPECT_NEAR(env.weights()[0][0], 0.1, 1e-15);
  EXPECT_NEAR(env.weights()[0][1], 0.8, 1e-15);
  EXPECT_NEAR(env.weights()[0][2], 0.1, 1e-15);
}

TEST(StudyEnv, Rewards) {
  const auto env = build_source_env(fixtures::study_config());
  for (std::size_t s = 0; s < 5; ++s)
    for (std::size_t a = 0; a < 16; ++a) {
      EXPECT_EQ(env.rewards()(0, s, a), 0.0);
      for (std::size_t h = 1; h < 3; ++h) {
        const double r = env.rewards()(h, s, a);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
      }
      EXPECT_EQ(env.rewards()(1, x5, a), 1.0);
      EXPECT_EQ(env.rewards()(2, x5, a), 1.0);
      EXPECT_EQ(env.rewards()(2, x4, a), 0.0);
    }
}

TEST(StudyEnv, TargetFamily) {
  const auto c = fixtures::study_config();
  const auto source = build_source_env(c);
  for (double q : {0.0, 0.3, 1.0}) {
    const auto target = build_target_env(source, q);
    EXPECT_EQ(target.weights()[0], (Vec{q, 1 - q, 0.0}));
    EXPECT_EQ(target.weights()[1], source.weights()[1]);
    EXPECT_EQ(target.weights()[2], source.weights()[2]);
    for (std::size_t a : {std::size_t{0}, std::size_t{5}, kAllOnes}) {
      const double succ = c.delta + xi_dot_action(c, a);
      const auto k = kernel(target, 0, x1, a);
      EXPECT_NEAR(k[x2], 1 - succ, 1e-15);
      EXPECT_NEAR(k[x4], q * succ, 1e-15);
      EXPECT_NEAR(k[x5], (1 - q) * succ, 1e-15);
    }
  }
  EXPECT_THROW(build_target_env(source, -0.1), std::invalid_argument);
  EXPECT_THROW(build_target_env(source, 1.5), std::invalid_argument);
}

TEST(StudyEnv, ConfigValidation) {
  auto c = fixtures::study_config();
  EXPECT_NO_THROW(c.validate());
  c.delta = 0.7;
  EXPECT_THROW(c.validate(), std::invalid_argument);  // delta + xi > 1
  c = fixtures::study_config();
  c.p = 0.6;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = fixtures::study_config();
  c.q_grid = {0.5, 1.2};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = fixtures::study_config();
  c.K = 0;
  EXPECT_THROW(build_source_env(c), std::invalid_argument);
  c = fixtures::study_config();
  c.rho_tv = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(ExperimentConfig::default_q_grid().size(), 21u);
}

TEST(CollectDataset, ShapeAndDeterminism) {
  const auto env = build_source_env(fixtures::study_config());
  const auto a = collect_dataset(env, 500, 4);
  const auto b = collect_dataset(env, 500, 4);
  ASSERT_EQ(a.size(), 500u);
  EXPECT_EQ(a.horizon(), 3u);
  EXPECT_NO_THROW(a.validate(env.modes()));
  bool differs = false;
  const auto c = collect_dataset(env, 500, 5);
  for (std::size_t k = 0; k < 500; ++k) {
    EXPECT_EQ(a.at(k, 0).state, x1);
    for (std::size_t h = 0; h < 3; ++h) {
      EXPECT_EQ(a.at(k, h).state, b.at(k, h).state);
      EXPECT_EQ(a.at(k, h).action, b.at(k, h).action);
      EXPECT_EQ(a.at(k, h).next_state, b.at(k, h).next_state);
      if (h + 1 < 3) EXPECT_EQ(a.at(k, h).next_state, a.at(k, h + 1).state);
      differs = differs || a.at(k, h).action != c.at(k, h).action;
    }
  }
  EXPECT_TRUE(differs);
}

TEST(Sweep, MethodList) {
  const auto methods = sweep_methods(fixtures::study_config());
  ASSERT_EQ(methods.size(), 8u);
  std::vector<std::string> names;
  for (const auto& m : methods) {
    names.push_back(m.name);
    EXPECT_NO_THROW(m.config.validate());
    EXPECT_EQ(m.config.uncertainty.rho == 0.0, m.name == "TTR" || m.name == "VTR") << m.name;
  }
  EXPECT_EQ(names, (std::vector<std::string>{"TTR", "DRTTR-TV", "DRTTR-KL", "DRTTR-chi2", "VTR", "DRVTR-TV", "DRVTR-KL",
                                             "DRVTR-chi2"}));
  EXPECT_EQ(methods[2].config.uncertainty.rho, 5.0);
  EXPECT_EQ(methods[7].config.estimator, Estimator::VTR);
}

TEST(Sweep, DeterministicAndBounded) {
  const auto config = small_sweep_config();
  const auto a = run_sweep(config);
  const auto b = run_sweep(config);
  ASSERT_EQ(a.rows.size(), 8u * 2u * 2u);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].method, b.rows[i].method);
    EXPECT_EQ(a.rows[i].avg_reward, b.rows[i].avg_reward);
    EXPECT_GE(a.rows[i].avg_reward, 0.0);
    EXPECT_LE(a.rows[i].avg_reward, 2.0);
  }
  EXPECT_EQ(a.summary.size(), 8u * 2u);
  EXPECT_THROW(a.find("TTR", 0.5), std::out_of_range);
  EXPECT_NO_THROW(a.find("DRTTR-TV", 1.0));
}

TEST(Sweep, NonRobustMatchesExactValue) {
  auto config = small_sweep_config();
  config.replications = 1;
  config.q_grid = {0.0};
  config.episodes = 2000;
  const auto table = run_sweep(config);
  const auto source = build_source_env(config);
  const auto data = collect_dataset(source, config.K, derive_seed(config.base_seed, {kDatasetStream, 0}));
  const auto ttr = train(source.modes(), source.rewards(), data, sweep_methods(config)[0].config);
  const auto target = build_target_env(source, 0.0);
  const double exact = ref::evaluate(fixtures::to_tabular(target), fixtures::to_nested(ttr.policy))[0][x1];
  const auto& row = table.find("TTR", 0.0);
  const auto mc = evaluate_policy_mc(target, ttr.policy, config.episodes, derive_seed(config.base_seed, {kEvaluationStream, 0}));
  EXPECT_NEAR(row.mean, mc.mean, 1e-12);
  EXPECT_NEAR(row.mean, exact, 3 * mc.std_error);
}

TEST(Sweep, SummaryStatistics) {
  const std::vector<ResultRow> rows{{"M", 0.5, 0, 1.0}, {"M", 0.5, 1, 2.0}, {"M", 0.5, 2, 3.0}, {"N", 0.0, 0, 4.0}};
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].method, "M");
  EXPECT_DOUBLE_EQ(s[0].mean, 2.0);
  EXPECT_NEAR(s[0].stderr_, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(s[1].stderr_, 0.0);
}
