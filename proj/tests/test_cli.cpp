#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "lmdr/io.hpp"

namespace fs = std::filesystem;
using lmdr::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("LMDR_TEST_TMP");
  const fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / ("cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& json) {
  const auto path = (dir / "config.json").string();
  lmdr::write_file(path, json);
  return path;
}

// "key value key value ..." -> value following `key`
double field(const std::string& line, const std::string& key) {
  std::istringstream in(line);
  std::string k;
  double v;
  while (in >> k) {
    if (k == key && in >> v) return v;
  }
  ADD_FAILURE() << "no field " << key << " in '" << line << "'";
  return 0.0;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, lmdr::kExitBadInput);
  EXPECT_EQ(cli({"--help"}).code, lmdr::kExitOk);
  const auto help = cli({"train", "--help"});
  EXPECT_EQ(help.code, lmdr::kExitOk);
  for (const char* flag : {"--dataset", "--estimator", "--divergence", "--rho", "--lambda", "--config", "--env", "--out"})
    EXPECT_NE(help.out.find(flag), std::string::npos) << flag;
  const auto bad = cli({"build-env", "--bogus"});
  EXPECT_EQ(bad.code, lmdr::kExitBadInput);
  EXPECT_NE(bad.err.find("lmdr:"), std::string::npos);
  EXPECT_EQ(cli({"frobnicate"}).code, lmdr::kExitBadInput);
  EXPECT_EQ(cli({"build-env", "--q", "2"}).code, lmdr::kExitBadInput);
  EXPECT_EQ(cli({"train", "--dataset", "/nonexistent/data.csv"}).code, lmdr::kExitBadInput);
}

TEST(Cli, MalformedConfigNamesTheProblem) {
  const auto dir = scratch("badconfig");
  const auto bad = cli({"build-env", "--config", write_config(dir, R"({"delta": 0.9})")});
  EXPECT_EQ(bad.code, lmdr::kExitBadInput);
  EXPECT_NE(bad.err.find("delta"), std::string::npos);
  EXPECT_EQ(bad.err.find('\n'), bad.err.size() - 1);
  const auto unknown = cli({"build-env", "--config", write_config(dir, R"({"speed": 1})")});
  EXPECT_EQ(unknown.code, lmdr::kExitBadInput);
  EXPECT_NE(unknown.err.find("speed"), std::string::npos);
}

TEST(Cli, BuildEnvIsLoadable) {
  const auto dir = scratch("env");
  const auto r = cli({"build-env", "--q", "0.5", "--out", dir.string()});
  ASSERT_EQ(r.code, lmdr::kExitOk) << r.err;
  const auto env = lmdr::env_from_json(lmdr::read_file((dir / "env.json").string()));
  EXPECT_EQ(env.weights()[0], (std::vector<double>{0.5, 0.5, 0.0}));
}

TEST(Cli, ValidateDualsSmall) {
  const auto r = cli({"validate-duals", "--instances", "5", "--seed", "7"});
  EXPECT_EQ(r.code, lmdr::kExitOk) << r.out;
  for (const char* div : {"tv ", "kl ", "chi2 "}) EXPECT_NE(r.out.find(div), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, ValidateSetsSmall) {
  const auto r = cli({"validate-sets", "--instances", "20", "--samples", "50"});
  EXPECT_EQ(r.code, lmdr::kExitOk) << r.out;
  EXPECT_NE(r.out.find("containment"), std::string::npos);
  EXPECT_NE(r.out.find("onehot reconstruction"), std::string::npos);
}

TEST(Cli, TrainThenEvaluateMatchesExactValue) {
  const auto dir = scratch("pipeline");
  const auto config = write_config(dir, R"({"K": 200, "episodes": 3000})");
  ASSERT_EQ(cli({"collect", "--config", config, "--seed", "3", "--out", dir.string()}).code, lmdr::kExitOk);
  const auto dataset = (dir / "dataset.csv").string();
  const auto t = cli({"train", "--config", config, "--dataset", dataset, "--estimator", "ttr", "--divergence", "tv",
                      "--rho", "0", "--out", dir.string()});
  ASSERT_EQ(t.code, lmdr::kExitOk) << t.err;
  EXPECT_NE(t.out.find("V1(s0) "), std::string::npos);
  const auto policy = (dir / "policy.json").string();
  const auto e = cli({"evaluate", "--config", config, "--policy", policy, "--q", "0", "--seed", "3"});
  ASSERT_EQ(e.code, lmdr::kExitOk) << e.err;
  const double avg = field(e.out, "avg_reward"), se = field(e.out, "stderr"), exact = field(e.out, "exact");
  EXPECT_EQ(field(e.out, "episodes"), 3000.0);
  EXPECT_GT(se, 0.0);
  EXPECT_LE(std::abs(avg - exact), 3 * se);

  // idempotent given fixed inputs
  const auto policy_text = lmdr::read_file(policy);
  ASSERT_EQ(cli({"train", "--config", config, "--dataset", dataset, "--estimator", "ttr", "--divergence", "tv",
                 "--rho", "0", "--out", dir.string()})
                .code,
            lmdr::kExitOk);
  EXPECT_EQ(lmdr::read_file(policy), policy_text);
  EXPECT_EQ(cli({"evaluate", "--config", config, "--policy", policy, "--q", "0", "--seed", "3"}).out, e.out);
}

TEST(Cli, TrainRejectsCorruptDataset) {
  const auto dir = scratch("corrupt");
  const auto path = (dir / "dataset.csv").string();
  lmdr::write_file(path, "k,h,s,a,s_next\n0,0,0,15,2\n0,1,2,0,4\n0,2,4,0,4\n");
  const auto r = cli({"train", "--dataset", path});
  EXPECT_EQ(r.code, lmdr::kExitBadInput);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, SweepRerunIsByteIdentical) {
  const auto dir = scratch("sweep");
  const auto config = write_config(dir, R"({"K": 40, "episodes": 20, "replications": 2, "q_grid": [0, 0.5, 1]})");
  const auto a = dir / "a", b = dir / "b";
  ASSERT_EQ(cli({"sweep", "--config", config, "--seed", "5", "--out", a.string()}).code, lmdr::kExitOk);
  ASSERT_EQ(cli({"sweep", "--config", config, "--seed", "5", "--out", b.string()}).code, lmdr::kExitOk);
  for (const char* name : {"results.csv", "summary.csv"}) {
    const auto x = lmdr::read_file((a / name).string());
    EXPECT_EQ(x, lmdr::read_file((b / name).string())) << name;
    EXPECT_FALSE(x.empty());
  }
  const auto results = lmdr::read_file((a / "results.csv").string());
  EXPECT_EQ(results.rfind("method,q,replication,avg_reward\n", 0), 0u);
  EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 1 + 8 * 3 * 2);
}
