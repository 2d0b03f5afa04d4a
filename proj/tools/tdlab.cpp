#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "tdlab/approximator.hpp"
#include "tdlab/chain_analysis.hpp"
#include "tdlab/generators.hpp"
#include "tdlab/io.hpp"
#include "tdlab/policy_gradient.hpp"
#include "tdlab/reversible.hpp"
#include "tdlab/td.hpp"
#include "tdlab/value.hpp"
#include "tdlab/verify.hpp"

namespace {

using tdlab::Json;

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("seed '" + text + "' is not an unsigned integer");
  return value;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("TDLAB_SEED");
  if (env == nullptr)
    return 20260816ull;
  return parse_seed(env);
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    tdlab::write_text_file(out, text);
}

Json spectral_to_json(const tdlab::SpectralReport& report) {
  Json j;
  j["beta"] = report.beta;
  j["lambda2"] = report.lambda2;
  j["lambda_min"] = report.lambda_min;
  j["psd"] = report.psd;
  return j;
}

Json report_to_json(const tdlab::VerificationReport& report) {
  Json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["instances"] = report.instance_hashes;
  Json checks = Json::array();
  for (const tdlab::CheckRecord& check : report.checks) {
    Json jc;
    jc["check_id"] = check.check_id;
    jc["anchor"] = check.anchor;
    jc["lhs"] = check.lhs;
    jc["rhs"] = check.rhs;
    jc["gap"] = check.gap;
    jc["tolerance"] = check.tolerance;
    jc["pass"] = check.pass;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  j["pass"] = report.pass;
  return j;
}

struct AnalyzeArgs {
  std::string mdp_path;
  std::string policy_path;
  double gamma = -1.0;  // < 0 means "skip the discounted solve"
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  const tdlab::Mdp mdp = tdlab::read_mdp_file(args.mdp_path);
  const tdlab::PolicyTable policy = tdlab::read_policy_file(args.policy_path, mdp);
  const tdlab::Chain chain = tdlab::induced_chain(mdp, policy);
  const Eigen::VectorXd mu = tdlab::stationary_distribution(chain);
  const Eigen::VectorXd r = tdlab::expected_reward_vector(mdp, policy);
  const tdlab::Chain with_mu(chain.p(), mu);
  const tdlab::ReversibilityCertificate cert = tdlab::check_reversibility(with_mu);

  Json j;
  j["command"] = "analyze";
  j["mdp_hash"] = tdlab::instance_hash(tdlab::mdp_to_json(mdp));
  j["policy_hash"] = tdlab::instance_hash(tdlab::policy_to_json(mdp, policy));
  j["n_states"] = mdp.n_states;
  j["stationary"] = tdlab::vector_to_json(mu);
  j["average_reward"] = mu.dot(r);
  j["reversibility"] = tdlab::certificate_to_json(cert);
  if (cert.pass) {
    const tdlab::Chain certified(chain.p(), mu, cert);
    j["spectral"] = spectral_to_json(tdlab::spectral_gap(certified));
  } else {
    j["spectral"] = nullptr;
  }
  j["relative_value"] = tdlab::vector_to_json(tdlab::relative_value(with_mu, r).values);
  if (args.gamma >= 0.0)
    j["discounted_value"] =
        tdlab::vector_to_json(tdlab::value_function(with_mu, r, args.gamma).values);
  emit(j, args.out);
  return 0;
}

struct VerifyArgs {
  std::string suite;
  tdlab::SuiteOptions options;
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  if (args.suite == "all") {
    const std::vector<tdlab::VerificationReport> reports = tdlab::run_all_suites(args.options);
    Json j;
    j["command"] = "verify";
    j["suite"] = "all";
    j["seed"] = args.options.seed;
    Json list = Json::array();
    bool pass = true;
    for (const tdlab::VerificationReport& report : reports) {
      pass = pass && report.pass;
      list.push_back(report_to_json(report));
    }
    j["reports"] = std::move(list);
    j["pass"] = pass;
    emit(j, args.out);
    return pass ? 0 : 1;
  }
  const tdlab::VerificationReport report = tdlab::run_suite(args.suite, args.options);
  emit(report_to_json(report), args.out);
  return report.pass ? 0 : 1;
}

struct TdArgs {
  std::string mdp_path;
  std::string policy_path;
  std::string family = "tabular";
  std::string features_path;
  Eigen::Index width = 4;
  double gamma = 0.0;
  std::int64_t steps = 0;
  std::string lr = "0.01";
  std::uint64_t seed = 0;
  std::string center = "none";
  std::int64_t interval = 1000;
  std::string out;
};

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

int run_td_command(const TdArgs& args) {
  const tdlab::Mdp mdp = tdlab::read_mdp_file(args.mdp_path);
  const tdlab::PolicyTable policy = tdlab::read_policy_file(args.policy_path, mdp);

  std::unique_ptr<tdlab::Approximator> approx;
  if (args.family == "tabular") {
    approx = tdlab::make_tabular(mdp.n_states);
  } else if (args.family == "linear") {
    if (args.features_path.empty())
      throw std::invalid_argument("family 'linear' needs --features FILE");
    approx = tdlab::make_linear(tdlab::read_matrix_file(args.features_path, "features"));
  } else if (args.family == "two_layer") {
    approx = tdlab::make_two_layer(mdp.n_states, args.width, args.seed);
  } else {
    throw std::invalid_argument("unknown family '" + args.family +
                                "'; expected tabular, linear or two_layer");
  }

  tdlab::TdConfig config;
  config.gamma = args.gamma;
  config.steps = args.steps;
  config.lr = tdlab::LearningRate::parse(args.lr);
  config.seed = args.seed;
  config.centering = tdlab::centering_from_string(args.center);
  config.log_interval = args.interval;

  const tdlab::TdReport report = tdlab::run_td(mdp, policy, *approx, config);
  tdlab::write_text_file(args.out, tdlab::td_records_csv(report));

  Json j;
  j["command"] = "td";
  j["family"] = report.family;
  j["gamma"] = config.gamma;
  j["steps"] = config.steps;
  j["lr"] = config.lr.describe();
  j["seed"] = config.seed;
  j["centering"] = tdlab::to_string(config.centering);
  j["log_interval"] = config.log_interval;
  j["mdp_hash"] = tdlab::instance_hash(tdlab::mdp_to_json(mdp));
  j["policy_hash"] = tdlab::instance_hash(tdlab::policy_to_json(mdp, policy));
  j["final_theta"] = tdlab::vector_to_json(report.final_theta);
  if (approx->features() != nullptr) {
    const tdlab::Chain chain = tdlab::induced_chain(mdp, policy);
    const Eigen::VectorXd r = tdlab::expected_reward_vector(mdp, policy);
    const Eigen::VectorXd value = config.gamma == 1.0
                                      ? tdlab::relative_value(chain, r).values
                                      : tdlab::value_function(chain, r, config.gamma).values;
    const Eigen::VectorXd best = tdlab::mixed_norm_minimizer(*approx, chain, value, config.gamma);
    j["minimizer_mixed_norm"] =
        tdlab::mixed_norm_sq(*approx, best, chain, value, config.gamma).mixed;
  } else {
    j["minimizer_mixed_norm"] = nullptr;
  }
  if (!report.records.empty()) {
    const tdlab::TdRecord& last = report.records.back();
    Json final;
    final["step"] = last.step;
    final["mixed_norm"] = last.mixed_norm;
    final["dir_norm_sq"] = last.dir_norm_sq;
    final["mu_norm_sq"] = last.mu_norm_sq;
    final["expected_step_norm"] = last.expected_step_norm;
    j["final"] = std::move(final);
  } else {
    j["final"] = nullptr;
  }
  tdlab::write_text_file(sidecar_path(args.out), j.dump(2) + "\n");
  return 0;
}

struct PgBiasArgs {
  std::string mdp_path;
  std::string phi_path;
  std::int64_t trials = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int run_pg_bias(const PgBiasArgs& args) {
  const tdlab::Mdp mdp = tdlab::read_mdp_file(args.mdp_path);
  const tdlab::SoftmaxPolicy family(mdp);
  const Eigen::VectorXd phi = tdlab::read_vector_file(args.phi_path, "phi");
  if (phi.size() != family.param_count())
    throw std::invalid_argument("phi has " + std::to_string(phi.size()) + " entries, the mdp needs " +
                                std::to_string(family.param_count()));

  const tdlab::PolicyTable table = family.table(phi);
  const tdlab::Chain chain = tdlab::induced_chain(mdp, table);
  const Eigen::VectorXd u =
      tdlab::relative_value(chain, tdlab::expected_reward_vector(mdp, table)).values;

  std::string csv = "trial,lambda,lhs,rhs,slack\n";
  tdlab::Rng rng(args.seed);
  for (std::int64_t trial = 0; trial < args.trials; ++trial) {
    const Eigen::VectorXd g = tdlab::random_vector(mdp.n_states, 1.0, rng);
    for (const double lambda : {0.01, 0.1, 1.0}) {
      const tdlab::BiasBound bound = tdlab::bias_bound_check(mdp, family, phi, u + lambda * g);
      csv += std::to_string(trial) + "," + tdlab::format_double(lambda) + "," +
             tdlab::format_double(bound.lhs) + "," + tdlab::format_double(bound.rhs) + "," +
             tdlab::format_double(bound.slack) + "\n";
    }
  }
  tdlab::write_text_file(args.out, csv);
  return 0;
}

struct MetropolisArgs {
  std::string graph_path;
  std::string target = "uniform";
  std::string out;
};

Eigen::VectorXd target_weights(const std::string& spec, Eigen::Index n) {
  if (spec == "uniform")
    return Eigen::VectorXd::Ones(n);
  if (spec.rfind("file:", 0) == 0)
    return tdlab::read_vector_file(spec.substr(5), "weights");
  if (spec.rfind("gibbs:", 0) == 0) {
    const std::string rest = spec.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("target 'gibbs:BETA:PATH' needs both parts");
    double beta = 0.0;
    const std::string beta_text = rest.substr(0, colon);
    const auto [ptr, ec] =
        std::from_chars(beta_text.data(), beta_text.data() + beta_text.size(), beta);
    if (ec != std::errc() || ptr != beta_text.data() + beta_text.size())
      throw std::invalid_argument("gibbs beta '" + beta_text + "' is not a number");
    const Eigen::VectorXd v = tdlab::read_vector_file(rest.substr(colon + 1), "values");
    return tdlab::gibbs_target(v, beta);
  }
  throw std::invalid_argument("unknown target '" + spec +
                              "'; expected uniform, file:PATH or gibbs:BETA:PATH");
}

int run_metropolis(const MetropolisArgs& args) {
  const tdlab::Graph graph = tdlab::read_graph_file(args.graph_path);
  const Eigen::VectorXd f = target_weights(args.target, graph.size());
  const tdlab::Chain chain = tdlab::metropolis_chain(graph, f);

  Json j;
  j["command"] = "metropolis";
  j["graph_hash"] = tdlab::instance_hash(tdlab::graph_to_json(graph));
  j["target"] = args.target;
  j["chain"] = tdlab::chain_to_json(chain);
  emit(j, args.out);
  return 0;
}

int run_fixture(const std::string& out_dir) {
  const tdlab::NavigationFixture fixture = tdlab::six_node_fixture();
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  const auto save = [&](const std::string& name, const Json& j) {
    tdlab::write_text_file((dir / name).string(), j.dump(2) + "\n");
  };
  save("mdp.json", tdlab::mdp_to_json(fixture.mdp));
  save("policy.json", tdlab::policy_to_json(fixture.mdp, fixture.policy));
  save("chain.json", tdlab::chain_to_json(fixture.chain));
  save("graph.json", tdlab::graph_to_json(fixture.graph));
  Json features;
  features["features"] = tdlab::matrix_to_json(fixture.features);
  save("features.json", features);
  Json rewards;
  rewards["edge_reward"] = tdlab::matrix_to_json(fixture.edge_reward);
  save("edge_reward.json", rewards);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: TDLAB_SEED: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Finite-state laboratory for temporal-difference learning on reversible chains"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Stationary law, mean reward, reversibility and spectrum of mdp + policy");
  analyze->add_option("--mdp", analyze_args.mdp_path, "mdp JSON file")->required();
  analyze->add_option("--policy", analyze_args.policy_path, "policy JSON file")->required();
  analyze->add_option("--gamma", analyze_args.gamma, "also solve the discounted values");
  analyze->add_option("--out", analyze_args.out, "write JSON here instead of stdout");

  VerifyArgs verify_args;
  verify_args.options.seed = seed;
  CLI::App* verify = app.add_subcommand("verify", "Run a numerical verification suite");
  verify
      ->add_option("suite", verify_args.suite,
                   "theorem1, theorem2, advantage, pg-bias, metropolis, grid, norms or all")
      ->required();
  verify->add_option("--trials", verify_args.options.trials, "override the suite trial count");
  verify->add_option("--seed", verify_args.options.seed, "base seed for the random instances");
  verify->add_option("--tol", verify_args.options.tol, "override per-check tolerances");
  verify->add_option("--out", verify_args.out, "write the report here instead of stdout");

  TdArgs td_args;
  td_args.seed = seed;
  CLI::App* td = app.add_subcommand("td", "Simulate temporal-difference learning");
  td->add_option("--mdp", td_args.mdp_path, "mdp JSON file")->required();
  td->add_option("--policy", td_args.policy_path, "policy JSON file")->required();
  td->add_option("--family", td_args.family, "tabular, linear or two_layer");
  td->add_option("--features", td_args.features_path, "feature matrix for the linear family");
  td->add_option("--width", td_args.width, "hidden width of the two_layer family");
  td->add_option("--gamma", td_args.gamma, "discount in [0, 1]")->required();
  td->add_option("--steps", td_args.steps, "number of transitions")->required();
  td->add_option("--lr", td_args.lr, "step size: CONST or decay:ALPHA0:TAU");
  td->add_option("--seed", td_args.seed, "trajectory seed");
  td->add_option("--center", td_args.center, "none, known or running (gamma = 1 only)");
  td->add_option("--interval", td_args.interval, "record every this many steps");
  td->add_option("--out", td_args.out, "CSV output path (JSON sidecar alongside)")->required();

  PgBiasArgs pg_args;
  pg_args.seed = seed;
  CLI::App* pg = app.add_subcommand("pg-bias", "Policy-gradient bias bound sweep");
  pg->add_option("--mdp", pg_args.mdp_path, "mdp JSON file")->required();
  pg->add_option("--phi", pg_args.phi_path, "softmax logits JSON file")->required();
  pg->add_option("--trials", pg_args.trials, "number of random perturbation directions");
  pg->add_option("--seed", pg_args.seed, "seed for the perturbations");
  pg->add_option("--out", pg_args.out, "CSV output path")->required();

  MetropolisArgs metro_args;
  CLI::App* metro = app.add_subcommand("metropolis", "Build a reversible chain on a graph");
  metro->add_option("--graph", metro_args.graph_path, "graph JSON file")->required();
  metro->add_option("--target", metro_args.target, "uniform, file:PATH or gibbs:BETA:PATH");
  metro->add_option("--out", metro_args.out, "write chain JSON here instead of stdout");

  std::string fixture_dir = ".";
  CLI::App* fixture = app.add_subcommand("fixture", "Write the 6-state demo instance as files");
  fixture->add_option("--out-dir", fixture_dir, "directory for the fixture files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze)
      return run_analyze(analyze_args);
    if (*verify)
      return run_verify(verify_args);
    if (*td)
      return run_td_command(td_args);
    if (*pg)
      return run_pg_bias(pg_args);
    if (*metro)
      return run_metropolis(metro_args);
    if (*fixture)
      return run_fixture(fixture_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
