#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lmdr/harness.hpp"
#include "lmdr/io.hpp"
#include "lmdr/oracle.hpp"
#include "lmdr/rng.hpp"
#include "lmdr/simulate.hpp"
#include "lmdr/validation.hpp"

namespace lmdr {

namespace {

constexpr double kDualGapTolerance = 5e-3;

struct Options {
  std::string config;
  std::string env;
  std::string dataset;
  std::string policy;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string estimator = "ttr";
  std::string divergence = "tv";
  double rho = 0.0;
  std::optional<double> lambda_reg;
  std::optional<double> q;
  std::optional<std::size_t> episodes;
  std::size_t instances = 100;
  std::size_t samples = 1000;
};

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : config_from_json(read_file(o.config));
  if (o.seed) c.base_seed = *o.seed;
  if (o.episodes) c.episodes = *o.episodes;
  c.validate();
  return c;
}

MixtureMDP load_env(const Options& o, const ExperimentConfig& c) {
  return o.env.empty() ? build_source_env(c) : env_from_json(read_file(o.env));
}

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Options& o, const std::string& name, const std::string& contents, std::ostream& out) {
  if (o.out.empty()) {
    out << contents;
    return;
  }
  std::filesystem::create_directories(o.out);
  const auto path = (std::filesystem::path(o.out) / name).string();
  write_file(path, contents);
  out << "wrote " << path << '\n';
}

int cmd_build_env(const Options& o, std::ostream& out) {
  const auto c = load_config(o);
  const auto source = build_source_env(c);
  const auto env = o.q ? build_target_env(source, *o.q) : source;
  emit(o, "env.json", env_to_json(env) + "\n", out);
  return kExitOk;
}

int cmd_collect(const Options& o, std::ostream& out) {
  const auto c = load_config(o);
  const auto env = load_env(o, c);
  const auto data = collect_dataset(env, c.K, derive_seed(c.base_seed, {kDatasetStream, 0}));
  std::ostringstream csv;
  write_dataset_csv(csv, data);
  emit(o, "dataset.csv", csv.str(), out);
  return kExitOk;
}

TrainConfig train_config_from(const Options& o) {
  TrainConfig t;
  t.estimator = parse_estimator(o.estimator);
  t.uncertainty = {parse_divergence(o.divergence), o.rho};
  t.lambda_reg = o.lambda_reg;
  t.validate();
  return t;
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto c = load_config(o);
  const auto env = load_env(o, c);
  const auto tc = train_config_from(o);
  std::ifstream in(o.dataset, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file '" + o.dataset + "'");
  const auto data = read_dataset_csv(in, env.modes(), env.horizon());
  const auto result = train(env.modes(), env.rewards(), data, tc, &env.weights());
  emit(o, "policy.json", trained_policy_to_json(result, tc) + "\n", out);
  out << "V1(s0) " << format_double(result.tables.v(0, env.initial_state())) << '\n';
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto c = load_config(o);
  auto env = load_env(o, c);
  if (o.q) env = build_target_env(env, *o.q);
  const auto loaded = trained_policy_from_json(read_file(o.policy));
  if (loaded.policy.horizon() != env.horizon() || loaded.policy.num_states() != env.num_states())
    throw std::invalid_argument("evaluate: policy shape does not match the environment");
  const auto mc = evaluate_policy_mc(env, loaded.policy, c.episodes, derive_seed(c.base_seed, {kEvaluationStream, 0}));
  const double exact = evaluate_policy_exact(env, loaded.policy).v(0, env.initial_state());
  out << "avg_reward " << format_double(mc.mean) << " stderr " << format_double(mc.std_error) << " episodes "
      << mc.episodes << " exact " << format_double(exact) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto c = load_config(o);
  const auto table = run_sweep(c);
  std::ostringstream results, summary;
  write_results_csv(results, table);
  write_summary_csv(summary, table);
  Options dir = o;
  if (dir.out.empty()) dir.out = ".";
  emit(dir, "results.csv", results.str(), out);
  emit(dir, "summary.csv", summary.str(), out);
  return kExitOk;
}

int cmd_validate_duals(const Options& o, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(0);
  bool ok = true;
  for (Divergence div : {Divergence::TV, Divergence::KL, Divergence::Chi2}) {
    const auto report = dual_primal_battery(div, o.instances, seed);
    const bool pass = report.max_gap <= kDualGapTolerance;
    ok = ok && pass;
    out << to_string(div) << " instances " << o.instances << " max_gap " << format_double(report.max_gap)
        << (pass ? " ok" : " FAIL") << '\n';
  }
  return ok ? kExitOk : kExitValidationFailure;
}

int cmd_validate_sets(const Options& o, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(0);
  constexpr double step = 1e-3;
  bool ok = true;
  auto line = [&](const std::string& what, bool pass, const std::string& detail) {
    ok = ok && pass;
    out << what << ' ' << detail << (pass ? " ok" : " FAIL") << '\n';
  };

  const auto two = two_mode_modes();
  const std::vector<double> half{0.5, 0.5};
  // two modes: P - P0 = (theta_1 - 1/2)(phi_1 - phi_2), so the diameter is rho * TV(phi_1, phi_2)
  const double mode_gap = tv_distance(two.row(0, 0, 0), two.row(1, 0, 0));
  for (double rho : {0.1, 0.25, 0.5}) {
    const double diam = mixture_ball_tv_diameter(two, 0, 0, half, rho, step);
    line("two-mode rho " + format_double(rho),
         std::abs(diam - mode_gap * rho) <= 2 * step && diam <= 0.8 * rho + 2 * step,
         "diameter " + format_double(diam) + " expected " + format_double(mode_gap * rho) + " bound " +
             format_double(0.8 * rho));
  }

  const auto cont = containment_battery(o.instances, o.samples, derive_seed(seed, {1}));
  line("containment", cont.failures == 0,
       "instances " + std::to_string(cont.instances) + " failures " + std::to_string(cont.failures) +
           " max_ratio " + format_double(cont.max_ratio));

  const auto kernel = random_tabular_kernel(3, 2, derive_seed(seed, {2}));
  const auto emb = tabular_onehot_embedding(kernel);
  double recon = 0.0;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 2; ++a) {
      const auto p = mixture_kernel(emb.modes, emb.theta, s, a);
      for (std::size_t n = 0; n < 3; ++n) recon = std::max(recon, std::abs(p[n] - kernel(s, a, n)));
    }
  line("onehot reconstruction", recon <= 1e-15, "max_error " + format_double(recon));
  for (double rho : {0.1, 0.25}) {
    double worst = 0.0;
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t a = 0; a < 2; ++a)
        worst = std::max(worst, std::abs(onehot_block_tv_diameter(kernel, s, a, rho, step) - rho));
    line("onehot diameter rho " + format_double(rho), worst <= 2 * step, "max_deviation " + format_double(worst));
  }
  return ok ? kExitOk : kExitValidationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributionally robust offline RL on linear mixture MDPs", "lmdr"};
  app.require_subcommand(1);
  Options o;

  auto config = [&](CLI::App* sub) { sub->add_option("--config", o.config, "Experiment config JSON")->check(CLI::ExistingFile); };
  auto env = [&](CLI::App* sub) {
    sub->add_option("--env", o.env, "Environment JSON (default: source env built from the config)")->check(CLI::ExistingFile);
  };
  auto seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Base seed (overrides the config)"); };
  auto outdir = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory (default: stdout)"); };

  auto* build_env = app.add_subcommand("build-env", "Emit the simulation environment as JSON");
  config(build_env), outdir(build_env);
  build_env->add_option("--q", o.q, "Emit the target env with stage-1 weights (q, 1-q, 0)")->check(CLI::Range(0.0, 1.0));

  auto* collect = app.add_subcommand("collect", "Collect K uniform-policy trajectories as dataset CSV");
  config(collect), env(collect), seed(collect), outdir(collect);

  auto* train_cmd = app.add_subcommand("train", "Train a (robust) policy from a dataset");
  config(train_cmd), env(train_cmd), outdir(train_cmd);
  train_cmd->add_option("--dataset", o.dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--estimator", o.estimator, "Weight estimator")->check(CLI::IsMember({"ttr", "vtr", "true"}));
  train_cmd->add_option("--divergence", o.divergence, "Uncertainty set divergence")->check(CLI::IsMember({"tv", "kl", "chi2"}));
  train_cmd->add_option("--rho", o.rho, "Uncertainty radius (0 = non-robust)")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lambda", o.lambda_reg, "Ridge parameter (default: d)")->check(CLI::PositiveNumber);

  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo and exact value of a trained policy");
  config(evaluate), env(evaluate), seed(evaluate);
  evaluate->add_option("--policy", o.policy, "Policy JSON from `train`")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--q", o.q, "Evaluate on the target env with perturbation q")->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--episodes", o.episodes, "Evaluation episodes (default: config)")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Full robustness sweep; writes results.csv and summary.csv");
  config(sweep), seed(sweep);
  sweep->add_option("--out", o.out, "Output directory (default: .)");
  sweep->add_option("--episodes", o.episodes, "Evaluation episodes (default: config)")->check(CLI::PositiveNumber);

  auto* vduals = app.add_subcommand("validate-duals", "Dual solvers vs brute-force primal on random instances");
  seed(vduals);
  vduals->add_option("--instances", o.instances, "Instances per divergence")->capture_default_str()->check(CLI::PositiveNumber);

  auto* vsets = app.add_subcommand("validate-sets", "Mixture-ball geometry and one-hot recovery checks");
  seed(vsets);
  vsets->add_option("--instances", o.instances, "Containment instances")->capture_default_str()->check(CLI::PositiveNumber);
  vsets->add_option("--samples", o.samples, "Samples per containment instance")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "lmdr: " << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    if (*build_env) return cmd_build_env(o, out);
    if (*collect) return cmd_collect(o, out);
    if (*train_cmd) return cmd_train(o, out);
    if (*evaluate) return cmd_evaluate(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*vduals) return cmd_validate_duals(o, out);
    if (*vsets) return cmd_validate_sets(o, out);
  } catch (const std::exception& e) {
    err << "lmdr: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace lmdr
