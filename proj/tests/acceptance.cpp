// Acceptance gate: one pass/fail line per criterion, exit code counts failures.
//
// Every numeric tolerance is pinned here or inside the verification suites;
// nothing adapts to the observed values. Criterion 11b is expected to fail:
// the lazy reflecting walk converges at second order, so halving the spacing
// shrinks the deviation by a factor near 4, outside the demanded [1.5, 3]
// window. The ctest entry marks it WILL_FAIL so the gate stays honest.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdlab/approximator.hpp"
#include "tdlab/chain_analysis.hpp"
#include "tdlab/generators.hpp"
#include "tdlab/io.hpp"
#include "tdlab/mdp.hpp"
#include "tdlab/td.hpp"
#include "tdlab/value.hpp"
#include "tdlab/verify.hpp"

using namespace tdlab;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double x) { return format_double(x); }

// Pass/fail and worst gap among checks whose id matches the predicate.
template <typename Pred>
Outcome summarize(const VerificationReport& report, Pred pred, const std::string& label) {
  int passed = 0, failed = 0;
  double worst_gap = 0.0;
  double at_tol = 0.0;
  for (const CheckRecord& check : report.checks) {
    if (!pred(check.check_id))
      continue;
    (check.pass ? passed : failed) += 1;
    if (std::abs(check.gap) >= worst_gap) {
      worst_gap = std::abs(check.gap);
      at_tol = check.tolerance;
    }
  }
  Outcome out;
  out.ok = failed == 0 && passed > 0;
  out.detail = label + ": " + std::to_string(passed) + " checks, worst |gap| " + fmt(worst_gap) +
               " (tol " + fmt(at_tol) + ")" + (failed > 0 ? ", " + std::to_string(failed) + " FAILED" : "");
  return out;
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const CheckRecord* find_check(const VerificationReport& report, const std::string& id) {
  for (const CheckRecord& check : report.checks)
    if (check.check_id == id)
      return &check;
  return nullptr;
}

Outcome criterion_theorem1() {
  const auto start = std::chrono::steady_clock::now();
  const VerificationReport report = run_suite("theorem1", SuiteOptions{});
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome out = summarize(
      report, [](const std::string& id) { return id.rfind("theorem1/t", 0) == 0; },
      "discounted expected step vs -1/2 mixed-norm gradient");
  out.ok = out.ok && elapsed < 60.0;
  out.detail += ", " + fmt(elapsed) + "s (budget 60s)";
  return out;
}

Outcome criterion_theorem2() {
  const VerificationReport report = run_suite("theorem2", SuiteOptions{});
  return summarize(
      report, [](const std::string& id) { return id.rfind("theorem2/t", 0) == 0; },
      "centered expected step vs -1/2 Dirichlet gradient");
}

Outcome criterion_control() {
  const SuiteOptions opt{};
  const ControlGapStats stats = nonreversible_control_gaps(opt.seed + 1, 20, 1e-3);
  Outcome out;
  out.ok = stats.exceeding >= 19;
  out.detail = "directed 3-cycle gap above 1e-3 in " + std::to_string(stats.exceeding) + "/" +
               std::to_string(stats.total) + " draws, range [" + fmt(stats.min_gap) + ", " +
               fmt(stats.max_gap) + "]";
  return out;
}

Outcome criterion_advantage_relative() {
  const VerificationReport report = run_suite("advantage", SuiteOptions{});
  return summarize(report, [](const std::string& id) { return ends_with(id, "/g1"); },
                   "squared advantage mismatch vs 2 Dir at gamma = 1");
}

Outcome criterion_advantage_discounted() {
  const VerificationReport report = run_suite("advantage", SuiteOptions{});
  return summarize(
      report,
      [](const std::string& id) { return ends_with(id, "/g0.3") || ends_with(id, "/g0.9"); },
      "squared advantage mismatch vs mixed form at gamma < 1");
}

Outcome criterion_bias_bound() {
  const VerificationReport report = run_suite("pg-bias", SuiteOptions{});
  return summarize(
      report,
      [](const std::string& id) { return ends_with(id, "/slack") || ends_with(id, "/quadratic"); },
      "gradient bias bound slack and quadratic scaling");
}

Outcome criterion_pg_fd() {
  const VerificationReport report = run_suite("pg-bias", SuiteOptions{});
  return summarize(report, [](const std::string& id) { return ends_with(id, "/fd"); },
                   "exact policy gradient vs finite differences");
}

Outcome criterion_baseline() {
  const VerificationReport report = run_suite("pg-bias", SuiteOptions{});
  return summarize(report, [](const std::string& id) { return ends_with(id, "/baseline"); },
                   "gradient invariance under state baselines");
}

Outcome criterion_metropolis() {
  const VerificationReport report = run_suite("metropolis", SuiteOptions{});
  return summarize(report, [](const std::string&) { return true; },
                   "detailed balance, target stationarity, triangle fixture");
}

Outcome criterion_norms() {
  const VerificationReport report = run_suite("norms", SuiteOptions{});
  return summarize(report, [](const std::string&) { return true; },
                   "Dirichlet-mu norm bounds and cycle spectral gaps");
}

Outcome criterion_grid_deviation() {
  const VerificationReport report = run_suite("grid", SuiteOptions{});
  const CheckRecord* coarse = find_check(report, "grid/d1/eps0.01");
  Outcome out;
  if (coarse == nullptr) {
    out.detail = "grid/d1/eps0.01 record missing";
    return out;
  }
  out.ok = coarse->pass;
  out.detail = "d=1, eps=0.01 Gaussian bump: |ratio - 1| = " + fmt(std::abs(coarse->lhs - 1.0)) +
               " (tol 0.1)";
  // The rest of the suite (finer spacing, refinement lower bound, d=2,
  // certificates) must hold too. The [1.5, 3] window is criterion 11b.
  for (const CheckRecord& check : report.checks)
    out.ok = out.ok && check.pass;
  return out;
}

Outcome criterion_grid_refinement() {
  const VerificationReport report = run_suite("grid", SuiteOptions{});
  const CheckRecord* refine = find_check(report, "grid/d1/refinement");
  Outcome out;
  if (refine == nullptr) {
    out.detail = "grid/d1/refinement record missing";
    return out;
  }
  const double factor = refine->lhs;
  out.ok = factor >= 1.5 && factor <= 3.0;
  out.detail = "halving eps shrinks the deviation by " + fmt(factor) +
               ", demanded window [1.5, 3]; centered differences cancel the odd "
               "Taylor term, so the true order is 2 (factor near 4)";
  return out;
}

Outcome criterion_td_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const NavigationFixture fixture = six_node_fixture();
  const auto lin = make_linear(fixture.features);
  const Eigen::VectorXd r = expected_reward_vector(fixture.mdp, fixture.policy);

  TdConfig config;
  config.steps = 200000;
  config.lr = LearningRate::parse("decay:0.2:2000");
  config.seed = 4242;
  config.log_interval = config.steps;

  config.gamma = 0.9;
  const TdReport run9 = run_td(fixture.mdp, fixture.policy, *lin, config);
  const Eigen::VectorXd v9 = value_function(fixture.chain, r, 0.9).values;
  const double best9 =
      mixed_norm_sq(*lin, mixed_norm_minimizer(*lin, fixture.chain, v9, 0.9), fixture.chain,
                    v9, 0.9)
          .mixed;
  const double gap9 = std::abs(run9.records.back().mixed_norm - best9);

  config.gamma = 1.0;
  config.centering = Centering::known;
  const TdReport run1k = run_td(fixture.mdp, fixture.policy, *lin, config);
  const Eigen::VectorXd u = relative_value(fixture.chain, r).values;
  const double best1 =
      mixed_norm_sq(*lin, mixed_norm_minimizer(*lin, fixture.chain, u, 1.0), fixture.chain, u,
                    1.0)
          .mixed;
  const double gap1 = std::abs(run1k.records.back().mixed_norm - best1);

  config.centering = Centering::running;
  const TdReport run1r = run_td(fixture.mdp, fixture.policy, *lin, config);
  const double rel = std::abs(run1r.records.back().mixed_norm - run1k.records.back().mixed_norm) /
                     run1k.records.back().mixed_norm;

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Outcome out;
  out.ok = gap9 <= 1e-2 && gap1 <= 1e-2 && rel <= 0.1 && elapsed < 30.0;
  out.detail = "final-vs-minimizer mixed norm gap " + fmt(gap9) + " (gamma 0.9), " + fmt(gap1) +
               " (gamma 1, known), running-vs-known " + fmt(100.0 * rel) + "% (tol 10%), " +
               fmt(elapsed) + "s (budget 30s)";
  return out;
}

Outcome criterion_solver_residuals() {
  Rng rng(606060);
  double worst_bellman = 0.0, worst_centered = 0.0, worst_center = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Chain chain =
        trial % 2 == 0
            ? random_dense_chain(2 + static_cast<Eigen::Index>(rng.uniform_int(9)), rng)
            : random_reversible_chain(2, 10, rng);
    const Eigen::VectorXd r = random_vector(chain.size(), 1.0, rng);
    const Eigen::VectorXd mu = stationary_distribution(chain);

    for (const double gamma : {0.3, 0.9, 0.99}) {
      const Eigen::VectorXd v = value_function(chain, r, gamma).values;
      const double res = (v - (r + gamma * (chain.p() * v))).cwiseAbs().maxCoeff();
      worst_bellman = std::max(worst_bellman, res);
    }
    const Eigen::VectorXd u = relative_value(chain, r).values;
    const double avg = mu.dot(r);
    const double res =
        (u - (chain.p() * u + r - Eigen::VectorXd::Constant(chain.size(), avg)))
            .cwiseAbs()
            .maxCoeff();
    worst_centered = std::max(worst_centered, res);
    worst_center = std::max(worst_center, std::abs(mu.dot(u)));
  }

  // Monte-Carlo cross-check on the 6-state fixture at gamma = 0.9.
  const NavigationFixture fixture = six_node_fixture();
  const Eigen::VectorXd r = expected_reward_vector(fixture.mdp, fixture.policy);
  const Eigen::VectorXd v = value_function(fixture.chain, r, 0.9).values;
  Rng mc(515151);
  std::string mc_detail;
  bool mc_ok = true;
  for (const Eigen::Index s0 : {Eigen::Index(0), Eigen::Index(3)}) {
    const int trajectories = 20000;
    const int horizon = 150;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < trajectories; ++i) {
      Eigen::Index s = s0;
      double ret = 0.0, discount = 1.0;
      for (int t = 0; t < horizon; ++t) {
        const Transition tr = sample_transition(fixture.mdp, fixture.policy, s, mc);
        ret += discount * tr.reward;
        discount *= 0.9;
        s = tr.next;
      }
      sum += ret;
      sum_sq += ret * ret;
    }
    const double mean = sum / trajectories;
    const double var = (sum_sq - trajectories * mean * mean) / (trajectories - 1);
    const double se = std::sqrt(var / trajectories);
    const double dev = std::abs(mean - v[s0]);
    mc_ok = mc_ok && dev <= 3.0 * se;
    mc_detail += ", MC state " + std::to_string(s0) + " off by " + fmt(dev / se) + " SE";
  }

  Outcome out;
  out.ok = worst_bellman <= 1e-10 && worst_centered <= 1e-10 && worst_center <= 1e-10 && mc_ok;
  out.detail = "worst Bellman residual " + fmt(worst_bellman) + ", centered " +
               fmt(worst_centered) + ", centering " + fmt(worst_center) + " (tol 1e-10)" +
               mc_detail + " (tol 3 SE)";
  return out;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  return status;
}

Outcome criterion_cli_determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.detail = "needs --cli PATH pointing at the command-line binary";
    return out;
  }

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "tdlab_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string d = dir.string();
  const std::string q = "\"" + cli + "\"";

  // Shared inputs: the fixture files plus a logits vector for pg-bias.
  if (run_command(q + " fixture --out-dir \"" + d + "\"") != 0) {
    out.detail = "fixture generation failed";
    return out;
  }
  {
    const NavigationFixture fixture = six_node_fixture();
    Eigen::Index n_params = 0;
    for (const auto& actions : fixture.mdp.actions)
      n_params += static_cast<Eigen::Index>(actions.size());
    Json j;
    j["phi"] = vector_to_json(Eigen::VectorXd::Zero(n_params));
    write_text_file(d + "/phi.json", j.dump(2) + "\n");
  }

  const std::string mdp = " --mdp \"" + d + "/mdp.json\"";
  const std::string policy = " --policy \"" + d + "/policy.json\"";
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"verify", {q + " verify norms --trials 10 --seed 777 --out \"" + d + "/OUT\"", "OUT"}},
      {"analyze", {q + " analyze" + mdp + policy + " --gamma 0.9 --out \"" + d + "/OUT\"", "OUT"}},
      {"td",
       {q + " td" + mdp + policy + " --family linear --features \"" + d +
            "/features.json\" --gamma 1 --center known --steps 20000 --lr decay:0.2:2000 "
            "--seed 99 --interval 5000 --out \"" +
            d + "/OUT\"",
        "OUT", "SIDECAR"}},
      {"pg-bias",
       {q + " pg-bias" + mdp + " --phi \"" + d + "/phi.json\" --trials 4 --seed 5 --out \"" + d +
            "/OUT\"",
        "OUT"}},
      {"metropolis",
       {q + " metropolis --graph \"" + d + "/graph.json\" --target uniform --out \"" + d +
            "/OUT\"",
        "OUT"}},
  };

  out.ok = true;
  for (const auto& [name, spec] : commands) {
    const std::string& tpl = spec.front();
    std::vector<std::string> products(spec.begin() + 1, spec.end());
    std::vector<std::string> first_bytes;
    for (int round = 0; round < 2; ++round) {
      const std::string base = d + "/" + name + "_" + std::to_string(round);
      std::string command = tpl;
      const std::string placeholder = d + "/OUT";
      for (std::size_t pos = command.find(placeholder); pos != std::string::npos;
           pos = command.find(placeholder))
        command.replace(pos, placeholder.size(), base + ".csvjson");
      if (run_command(command) != 0) {
        out.ok = false;
        out.detail += name + " exited nonzero; ";
        break;
      }
      std::vector<std::string> bytes;
      for (const std::string& product : products) {
        std::filesystem::path path(base + ".csvjson");
        if (product == "SIDECAR")
          path.replace_extension(".json");
        bytes.push_back(read_bytes(path));
        if (bytes.back().empty()) {
          out.ok = false;
          out.detail += name + " produced an empty " + product + "; ";
        }
      }
      if (round == 0)
        first_bytes = bytes;
      else if (bytes != first_bytes) {
        out.ok = false;
        out.detail += name + " output differs between runs; ";
      }
    }
  }
  if (out.ok)
    out.detail = "verify, analyze, td(+sidecar), pg-bias, metropolis byte-identical across reruns";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string criterion = "all";
  std::string cli;
  CLI::App app{"Acceptance gate"};
  app.add_option("--criterion", criterion, "1..10, 11a, 11b, 12, 13, 14 or all");
  app.add_option("--cli", cli, "path to the command-line binary (criterion 14)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> table = {
      {"1", criterion_theorem1},
      {"2", criterion_theorem2},
      {"3", criterion_control},
      {"4", criterion_advantage_relative},
      {"5", criterion_advantage_discounted},
      {"6", criterion_bias_bound},
      {"7", criterion_pg_fd},
      {"8", criterion_baseline},
      {"9", criterion_metropolis},
      {"10", criterion_norms},
      {"11a", criterion_grid_deviation},
      {"11b", criterion_grid_refinement},
      {"12", criterion_td_end_to_end},
      {"13", criterion_solver_residuals},
      {"14", [&cli] { return criterion_cli_determinism(cli); }},
  };

  int failures = 0;
  bool matched = false;
  for (const auto& [id, fn] : table) {
    if (criterion != "all" && criterion != id)
      continue;
    matched = true;
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = std::string("threw: ") + e.what();
    }
    std::cout << (outcome.ok ? "PASS" : "FAIL") << " acceptance-" << id << ": " << outcome.detail
              << "\n";
    failures += outcome.ok ? 0 : 1;
  }
  if (!matched) {
    std::cerr << "error: unknown criterion '" << criterion << "'\n";
    return 2;
  }
  return failures;
}
