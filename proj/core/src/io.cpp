#include "lmdr/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace lmdr {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) fail(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string(what) + ": field '" + key + "' has the wrong type or shape");
  }
}

json train_config_json(const TrainConfig& c) {
  json j;
  j["divergence"] = std::string(to_string(c.uncertainty.divergence));
  j["rho"] = c.uncertainty.rho;
  j["estimator"] = std::string(to_string(c.estimator));
  j["lambda_reg"] = c.lambda_reg ? json(*c.lambda_reg) : json(nullptr);
  j["value_clip"] = c.value_clip;
  j["zeta"] = c.zeta;
  j["p_min"] = c.p_min;
  return j;
}

TrainConfig train_config_from(const json& j) {
  TrainConfig c;
  c.uncertainty.divergence = parse_divergence(field<std::string>(j, "divergence", "train config"));
  c.uncertainty.rho = field<double>(j, "rho", "train config");
  c.estimator = parse_estimator(field<std::string>(j, "estimator", "train config"));
  if (j.contains("lambda_reg") && !j["lambda_reg"].is_null()) c.lambda_reg = field<double>(j, "lambda_reg", "train config");
  if (j.contains("value_clip")) c.value_clip = field<bool>(j, "value_clip", "train config");
  if (j.contains("zeta")) c.zeta = field<double>(j, "zeta", "train config");
  if (j.contains("p_min")) c.p_min = field<double>(j, "p_min", "train config");
  c.validate();
  return c;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string env_to_json(const MixtureMDP& mdp) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions(), d = mdp.num_modes(), H = mdp.horizon();
  json phi = json::array();
  for (std::size_t i = 0; i < d; ++i) {
    json by_state = json::array();
    for (std::size_t s = 0; s < S; ++s) {
      json by_action = json::array();
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = mdp.modes().row(i, s, a);
        by_action.push_back(std::vector<double>(row.begin(), row.end()));
      }
      by_state.push_back(std::move(by_action));
    }
    phi.push_back(std::move(by_state));
  }
  json rewards = json::array();
  for (std::size_t h = 0; h < H; ++h) {
    json by_state = json::array();
    for (std::size_t s = 0; s < S; ++s) {
      std::vector<double> row(A);
      for (std::size_t a = 0; a < A; ++a) row[a] = mdp.rewards()(h, s, a);
      by_state.push_back(row);
    }
    rewards.push_back(std::move(by_state));
  }
  json j;
  j["num_states"] = S;
  j["num_actions"] = A;
  j["horizon"] = H;
  j["phi"] = std::move(phi);
  j["theta"] = mdp.weights();
  j["rewards"] = std::move(rewards);
  j["initial_state"] = mdp.initial_state();
  return j.dump(1);
}

MixtureMDP env_from_json(const std::string& text) {
  const char* what = "environment";
  const json j = parse(text, what);
  const auto S = field<std::size_t>(j, "num_states", what);
  const auto A = field<std::size_t>(j, "num_actions", what);
  const auto H = field<std::size_t>(j, "horizon", what);
  const auto phi = field<std::vector<std::vector<std::vector<std::vector<double>>>>>(j, "phi", what);
  const auto theta = field<MixtureWeights>(j, "theta", what);
  const auto rewards = field<std::vector<std::vector<std::vector<double>>>>(j, "rewards", what);
  const auto s0 = field<std::size_t>(j, "initial_state", what);

  std::vector<double> flat_phi;
  for (const auto& by_state : phi) {
    if (by_state.size() != S) fail("environment: phi must have num_states rows per mode");
    for (const auto& by_action : by_state) {
      if (by_action.size() != A) fail("environment: phi must have num_actions rows per state");
      for (const auto& row : by_action) {
        if (row.size() != S) fail("environment: each phi row must have num_states entries");
        flat_phi.insert(flat_phi.end(), row.begin(), row.end());
      }
    }
  }
  std::vector<double> flat_r;
  if (rewards.size() != H) fail("environment: rewards must have one table per stage");
  for (const auto& by_state : rewards) {
    if (by_state.size() != S) fail("environment: rewards must have num_states rows per stage");
    for (const auto& row : by_state) {
      if (row.size() != A) fail("environment: each reward row must have num_actions entries");
      flat_r.insert(flat_r.end(), row.begin(), row.end());
    }
  }
  return MixtureMDP(BasisModes(phi.size(), S, A, std::move(flat_phi)), theta,
                    RewardTable(H, S, A, std::move(flat_r)), s0);
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["delta"] = c.delta;
  j["xi_norm"] = c.xi_norm;
  j["p"] = c.p;
  j["theta1_variant"] = c.theta1_variant == NominalVariant::A ? "A" : "B";
  j["rho_tv"] = c.rho_tv;
  j["rho_kl"] = c.rho_kl;
  j["rho_chi2"] = c.rho_chi2;
  j["K"] = c.K;
  j["episodes"] = c.episodes;
  j["replications"] = c.replications;
  j["q_grid"] = c.q_grid;
  j["base_seed"] = c.base_seed;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const char* what = "config";
  const json j = parse(text, what);
  if (!j.is_object()) fail("config: top level must be an object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "delta") c.delta = field<double>(j, "delta", what);
    else if (key == "xi_norm") c.xi_norm = field<double>(j, "xi_norm", what);
    else if (key == "p") c.p = field<double>(j, "p", what);
    else if (key == "theta1_variant") {
      const auto v = field<std::string>(j, "theta1_variant", what);
      if (v == "A") c.theta1_variant = NominalVariant::A;
      else if (v == "B") c.theta1_variant = NominalVariant::B;
      else fail("config: theta1_variant must be \"A\" or \"B\"");
    } else if (key == "rho_tv") c.rho_tv = field<double>(j, "rho_tv", what);
    else if (key == "rho_kl") c.rho_kl = field<double>(j, "rho_kl", what);
    else if (key == "rho_chi2") c.rho_chi2 = field<double>(j, "rho_chi2", what);
    else if (key == "K") c.K = field<std::size_t>(j, "K", what);
    else if (key == "episodes") c.episodes = field<std::size_t>(j, "episodes", what);
    else if (key == "replications") c.replications = field<std::size_t>(j, "replications", what);
    else if (key == "q_grid") c.q_grid = field<std::vector<double>>(j, "q_grid", what);
    else if (key == "base_seed") c.base_seed = field<std::uint64_t>(j, "base_seed", what);
    else fail("config: unknown field '" + key + "'");
  }
  c.validate();
  return c;
}

std::string train_config_to_json(const TrainConfig& config) { return train_config_json(config).dump(2); }

std::string trained_policy_to_json(const TrainResult& result, const TrainConfig& config) {
  const auto& t = result.tables;
  json policy = json::array(), v = json::array(), q = json::array();
  for (std::size_t h = 0; h < t.horizon; ++h) {
    std::vector<std::size_t> row(t.num_states);
    for (std::size_t s = 0; s < t.num_states; ++s) row[s] = result.policy(h, s);
    policy.push_back(row);
  }
  for (std::size_t h = 0; h <= t.horizon; ++h) {
    const auto vs = t.v_stage(h);
    v.push_back(std::vector<double>(vs.begin(), vs.end()));
  }
  for (std::size_t h = 0; h < t.horizon; ++h) {
    json by_state = json::array();
    for (std::size_t s = 0; s < t.num_states; ++s) {
      const auto row = t.q_row(h, s);
      by_state.push_back(std::vector<double>(row.begin(), row.end()));
    }
    q.push_back(std::move(by_state));
  }
  json theta_hat = json::array(), theta_proj = json::array(), beta = json::array();
  for (const auto& est : result.estimates) {
    theta_hat.push_back(std::vector<double>(est.theta_hat.data(), est.theta_hat.data() + est.theta_hat.size()));
    theta_proj.push_back(est.theta_proj);
    beta.push_back(est.beta);
  }
  json j;
  j["policy"] = std::move(policy);
  j["v"] = std::move(v);
  j["q"] = std::move(q);
  j["config"] = train_config_json(config);
  j["theta_hat"] = std::move(theta_hat);
  j["theta_proj"] = std::move(theta_proj);
  j["beta"] = std::move(beta);
  j["nominal_theta"] = result.nominal;
  return j.dump(1);
}

LoadedPolicy trained_policy_from_json(const std::string& text) {
  const char* what = "policy";
  const json j = parse(text, what);
  const auto rows = field<std::vector<std::vector<std::size_t>>>(j, "policy", what);
  if (rows.empty()) fail("policy: 'policy' must have at least one stage");
  const std::size_t S = rows.front().size();
  std::vector<std::size_t> flat;
  for (const auto& r : rows) {
    if (r.size() != S) fail("policy: every stage must list one action per state");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  if (!j.contains("config")) fail("policy: missing field 'config'");
  return {Policy(rows.size(), S, std::move(flat)), train_config_from(j["config"])};
}

void write_dataset_csv(std::ostream& out, const OfflineDataset& data) {
  out << "k,h,s,a,s_next\n";
  for (std::size_t k = 0; k < data.size(); ++k)
    for (std::size_t h = 0; h < data.horizon(); ++h) {
      const auto& t = data.at(k, h);
      out << k << ',' << h << ',' << t.state << ',' << t.action << ',' << t.next_state << '\n';
    }
}

OfflineDataset read_dataset_csv(std::istream& in, const BasisModes& modes, std::size_t horizon) {
  std::string line;
  if (!std::getline(in, line)) fail("dataset: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,h,s,a,s_next") fail("dataset: header must be 'k,h,s,a,s_next'");

  std::map<std::size_t, std::vector<std::optional<Transition>>> by_k;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t vals[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 5; ++c) {
      const auto res = std::from_chars(p, end, vals[c]);
      if (res.ec != std::errc()) fail("dataset: line " + std::to_string(line_no) + " is not five non-negative integers");
      p = res.ptr;
      if (c < 4) {
        if (p == end || *p != ',') fail("dataset: line " + std::to_string(line_no) + " must have five fields");
        ++p;
      }
    }
    if (p != end) fail("dataset: trailing characters on line " + std::to_string(line_no));
    const auto [k, h, s, a, next] = std::tuple{vals[0], vals[1], vals[2], vals[3], vals[4]};
    if (h >= horizon) fail("dataset: stage out of range on line " + std::to_string(line_no));
    auto& traj = by_k[k];
    traj.resize(horizon);
    if (traj[h]) fail("dataset: duplicate (k, h) on line " + std::to_string(line_no));
    traj[h] = Transition{s, a, next};
  }

  OfflineDataset data(horizon);
  for (auto& [k, traj] : by_k) {
    std::vector<Transition> steps;
    for (std::size_t h = 0; h < horizon; ++h) {
      if (!traj[h]) fail("dataset: trajectory " + std::to_string(k) + " is missing stage " + std::to_string(h));
      steps.push_back(*traj[h]);
    }
    data.add(std::move(steps));
  }
  data.validate(modes);
  return data;
}

void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << "method,q,replication,avg_reward\n";
  for (const auto& r : table.rows)
    out << r.method << ',' << format_double(r.q) << ',' << r.replication << ',' << format_double(r.avg_reward) << '\n';
}

void write_summary_csv(std::ostream& out, const ResultTable& table) {
  out << "method,q,mean,stderr\n";
  for (const auto& r : table.summary)
    out << r.method << ',' << format_double(r.q) << ',' << format_double(r.mean) << ',' << format_double(r.stderr_) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write file '" + path + "'");
  out << contents;
  if (!out) fail("failed writing '" + path + "'");
}

}  // namespace lmdr
