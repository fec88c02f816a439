#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "lmdr/io.hpp"

using namespace lmdr;
using Vec = std::vector<double>;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.05), "0.05");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(EnvJson, RoundTrip) {
  const auto env = build_target_env(build_source_env(fixtures::study_config()), 0.35);
  const auto back = env_from_json(env_to_json(env));
  EXPECT_EQ(back.modes().data(), env.modes().data());
  EXPECT_EQ(back.weights(), env.weights());
  EXPECT_EQ(back.rewards().data(), env.rewards().data());
  EXPECT_EQ(back.initial_state(), env.initial_state());
  EXPECT_EQ(env_to_json(back), env_to_json(env));
}

TEST(EnvJson, RejectsMalformed) {
  EXPECT_THROW(env_from_json("{"), std::invalid_argument);
  EXPECT_THROW(env_from_json("{}"), std::invalid_argument);
  auto text = env_to_json(fixtures::two_state_toy());
  const auto pos = text.find("0.5");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 3, "0.7");  // weights no longer sum to one
  EXPECT_THROW(env_from_json(text), std::invalid_argument);
}

TEST(ConfigJson, RoundTripAndDefaults) {
  ExperimentConfig c;
  c.delta = 0.3;
  c.xi_norm = 0.2;
  c.theta1_variant = NominalVariant::B;
  c.K = 123;
  c.q_grid = {0.0, 0.25, 1.0};
  c.base_seed = 99;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.delta, 0.3);
  EXPECT_EQ(back.xi_norm, 0.2);
  EXPECT_EQ(back.theta1_variant, NominalVariant::B);
  EXPECT_EQ(back.K, 123u);
  EXPECT_EQ(back.q_grid, c.q_grid);
  EXPECT_EQ(back.base_seed, 99u);
  EXPECT_EQ(config_to_json(back), config_to_json(c));

  const auto partial = config_from_json(R"({"K": 10, "theta1_variant": "A"})");
  EXPECT_EQ(partial.K, 10u);
  EXPECT_EQ(partial.rho_tv, 0.35);
  EXPECT_EQ(partial.q_grid.size(), 21u);
}

TEST(ConfigJson, RejectsBadInput) {
  EXPECT_THROW(config_from_json(R"({"KK": 10})"), std::invalid_argument);
  EXPECT_THROW(config_from_json(R"({"theta1_variant": "C"})"), std::invalid_argument);
  EXPECT_THROW(config_from_json(R"({"K": "ten"})"), std::invalid_argument);
  EXPECT_THROW(config_from_json(R"({"delta": 0.9})"), std::invalid_argument);
  EXPECT_THROW(config_from_json("[1, 2]"), std::invalid_argument);
}

TEST(PolicyJson, RoundTrip) {
  const auto env = build_source_env(fixtures::study_config());
  const auto data = collect_dataset(env, 50, 3);
  TrainConfig config;
  config.uncertainty = {Divergence::KL, 2.5};
  config.estimator = Estimator::VTR;
  config.lambda_reg = 1.5;
  const auto result = train(env.modes(), env.rewards(), data, config);
  const auto loaded = trained_policy_from_json(trained_policy_to_json(result, config));
  EXPECT_EQ(loaded.policy, result.policy);
  EXPECT_EQ(loaded.config.uncertainty.divergence, Divergence::KL);
  EXPECT_EQ(loaded.config.uncertainty.rho, 2.5);
  EXPECT_EQ(loaded.config.estimator, Estimator::VTR);
  EXPECT_EQ(loaded.config.lambda_reg, 1.5);
  EXPECT_THROW(trained_policy_from_json(R"({"policy": [[0]]})"), std::invalid_argument);
}

TEST(DatasetCsv, RoundTripBytes) {
  const auto env = build_source_env(fixtures::study_config());
  const auto data = collect_dataset(env, 20, 9);
  std::ostringstream out;
  write_dataset_csv(out, data);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("k,h,s,a,s_next\n", 0), 0u);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream in(text);
  const auto back = read_dataset_csv(in, env.modes(), 3);
  ASSERT_EQ(back.size(), 20u);
  std::ostringstream again;
  write_dataset_csv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(DatasetCsv, AcceptsShuffledRows) {
  const auto env = build_source_env(fixtures::study_config());
  std::istringstream in("k,h,s,a,s_next\n0,2,4,1,4\n0,0,0,15,4\n0,1,4,3,4\n");
  const auto data = read_dataset_csv(in, env.modes(), 3);
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data.at(0, 0).action, 15u);
  EXPECT_EQ(data.at(0, 1).action, 3u);
}

TEST(DatasetCsv, RejectsBadRows) {
  const auto env = build_source_env(fixtures::study_config());
  const auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return read_dataset_csv(in, env.modes(), 3);
  };
  EXPECT_THROW(parse(""), std::invalid_argument);
  EXPECT_THROW(parse("k,h,s,a\n"), std::invalid_argument);
  EXPECT_THROW(parse("k,h,s,a,s_next\n0,0,0,15,4\n0,1,4,3,4\n"), std::invalid_argument);                // missing stage
  EXPECT_THROW(parse("k,h,s,a,s_next\n0,0,0,15,4\n0,0,0,15,4\n0,1,4,3,4\n0,2,4,1,4\n"), std::invalid_argument);  // duplicate
  EXPECT_THROW(parse("k,h,s,a,s_next\n0,0,0,15,2\n0,1,2,3,4\n0,2,4,1,4\n"), std::invalid_argument);     // infeasible
  EXPECT_THROW(parse("k,h,s,a,s_next\n0,0,0,x,4\n"), std::invalid_argument);
  EXPECT_THROW(parse("k,h,s,a,s_next\n0,0,0,16,4\n0,1,4,3,4\n0,2,4,1,4\n"), std::invalid_argument);
}

TEST(ResultsCsv, Format) {
  ResultTable table;
  table.rows = {{"TTR", 0.05, 0, 1.25}, {"TTR", 0.05, 1, 0.75}};
  table.summary = summarize(table.rows);
  std::ostringstream results, summary;
  write_results_csv(results, table);
  write_summary_csv(summary, table);
  EXPECT_EQ(results.str(), "method,q,replication,avg_reward\nTTR,0.05,0,1.25\nTTR,0.05,1,0.75\n");
  EXPECT_EQ(summary.str(), "method,q,mean,stderr\nTTR,0.05,1,0.25\n");
}
