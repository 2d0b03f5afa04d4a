#include "tdlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tdlab/approximator.hpp"
#include "tdlab/chain_analysis.hpp"
#include "tdlab/generators.hpp"
#include "tdlab/io.hpp"
#include "tdlab/policy_gradient.hpp"
#include "tdlab/reversible.hpp"
#include "tdlab/td.hpp"
#include "tdlab/value.hpp"

namespace tdlab {

namespace {

std::string trial_tag(std::int64_t i) {
  return i < 10 ? "t0" + std::to_string(i) : "t" + std::to_string(i);
}

std::string gamma_tag(double gamma) { return "g" + format_double(gamma); }

// |lhs - rhs| <= tol.
void add_eq(VerificationReport& report, std::string id, std::string anchor, double lhs,
            double rhs, double tol) {
  CheckRecord check;
  check.check_id = std::move(id);
  check.anchor = std::move(anchor);
  check.lhs = lhs;
  check.rhs = rhs;
  check.gap = std::abs(lhs - rhs);
  check.tolerance = tol;
  check.pass = check.gap <= tol;
  report.checks.push_back(std::move(check));
}

// lhs <= rhs + tol.
void add_upper(VerificationReport& report, std::string id, std::string anchor, double lhs,
               double rhs, double tol) {
  CheckRecord check;
  check.check_id = std::move(id);
  check.anchor = std::move(anchor);
  check.lhs = lhs;
  check.rhs = rhs;
  check.gap = lhs - rhs;
  check.tolerance = tol;
  check.pass = lhs <= rhs + tol;
  report.checks.push_back(std::move(check));
}

// lhs >= rhs - tol.
void add_lower(VerificationReport& report, std::string id, std::string anchor, double lhs,
               double rhs, double tol) {
  CheckRecord check;
  check.check_id = std::move(id);
  check.anchor = std::move(anchor);
  check.lhs = lhs;
  check.rhs = rhs;
  check.gap = rhs - lhs;
  check.tolerance = tol;
  check.pass = lhs >= rhs - tol;
  report.checks.push_back(std::move(check));
}

void finish(VerificationReport& report) {
  report.pass = true;
  for (const CheckRecord& check : report.checks)
    report.pass = report.pass && check.pass;
}

Eigen::VectorXd uniform_rewards(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd r(n);
  for (Eigen::Index s = 0; s < n; ++s)
    r[s] = rng.uniform(-1.0, 1.0);
  return r;
}

Eigen::MatrixXd random_edge_rewards(const Chain& chain, Rng& rng) {
  const Eigen::Index n = chain.size();
  Eigen::MatrixXd er = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      if (chain.p()(s, t) > 0.0)
        er(s, t) = rng.uniform(-1.0, 1.0);
  return er;
}

std::vector<std::unique_ptr<Approximator>> trial_families(const Chain& chain, Rng& rng) {
  const Eigen::Index n = chain.size();
  std::vector<std::unique_ptr<Approximator>> families;
  families.push_back(make_tabular(n));
  families.push_back(make_linear(random_matrix(n, std::max<Eigen::Index>(2, n / 3 + 1), 1.0, rng)));
  families.push_back(make_two_layer(n, 4, rng.next_u64()));
  return families;
}

// Worst draw of a per-draw (gap, tolerance) family, reported as one check.
struct WorstDraw {
  bool seen = false;
  double gap = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  void feed(double gap_i, double tol_i) {
    if (!seen || gap_i - tol_i > gap - tolerance) {
      gap = gap_i;
      tolerance = tol_i;
      seen = true;
    }
    pass = pass && gap_i <= tol_i;
  }
};

VerificationReport theorem1_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "theorem1";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 20;
  const double floor = opt.tol > 0.0 ? opt.tol : 1e-6;

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    const Chain chain = random_reversible_chain(3, 12, rng);
    report.instance_hashes.push_back(instance_hash(chain_to_json(chain)));
    const Eigen::VectorXd r = uniform_rewards(chain.size(), rng);

    for (const auto& family : trial_families(chain, rng)) {
      for (const double gamma : {0.0, 0.3, 0.9, 0.99}) {
        WorstDraw worst;
        for (int draw = 0; draw < 10; ++draw) {
          const Eigen::VectorXd theta = random_vector(family->param_count(), 1.0, rng);
          const TheoremGap gap = theorem1_gap(*family, theta, chain, r, gamma);
          const double tol =
              std::max(floor, 1e-4 * gap.expected_step.cwiseAbs().maxCoeff());
          worst.feed(gap.gap_inf_norm, tol);
        }
        CheckRecord check;
        check.check_id = "theorem1/" + trial_tag(trial) + "/" + family->family() + "/" +
                         gamma_tag(gamma);
        check.anchor = "td-descent-reversible";
        check.lhs = worst.gap;
        check.rhs = 0.0;
        check.gap = worst.gap;
        check.tolerance = worst.tolerance;
        check.pass = worst.pass;
        report.checks.push_back(std::move(check));
      }
    }
  }

  const ControlGapStats control = nonreversible_control_gaps(opt.seed + 1, 20, 1e-3);
  add_lower(report, "theorem1/control/cycle3", "td-descent-reversible",
            static_cast<double>(control.exceeding), 19.0, 0.0);
  finish(report);
  return report;
}

VerificationReport theorem2_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "theorem2";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 20;
  const double floor = opt.tol > 0.0 ? opt.tol : 1e-6;

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    const Chain chain = random_reversible_chain(3, 12, rng);
    report.instance_hashes.push_back(instance_hash(chain_to_json(chain)));
    const Eigen::VectorXd r = uniform_rewards(chain.size(), rng);

    for (const auto& family : trial_families(chain, rng)) {
      WorstDraw worst;
      for (int draw = 0; draw < 10; ++draw) {
        const Eigen::VectorXd theta = random_vector(family->param_count(), 1.0, rng);
        const TheoremGap gap = theorem2_gap(*family, theta, chain, r);
        const double tol = std::max(floor, 1e-4 * gap.expected_step.cwiseAbs().maxCoeff());
        worst.feed(gap.gap_inf_norm, tol);
      }
      CheckRecord check;
      check.check_id = "theorem2/" + trial_tag(trial) + "/" + family->family();
      check.anchor = "td-descent-average-reward";
      check.lhs = worst.gap;
      check.rhs = 0.0;
      check.gap = worst.gap;
      check.tolerance = worst.tolerance;
      check.pass = worst.pass;
      report.checks.push_back(std::move(check));
    }
  }
  finish(report);
  return report;
}

VerificationReport advantage_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "advantage";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 50;
  const double rel = opt.tol > 0.0 ? opt.tol : 1e-12;

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    // Alternate between generic dense chains and reversible ones; the
    // identity is algebraic and must hold for both.
    const Chain chain =
        trial % 2 == 0
            ? random_dense_chain(2 + static_cast<Eigen::Index>(rng.uniform_int(9)), rng)
            : random_reversible_chain(2, 10, rng);
    report.instance_hashes.push_back(instance_hash(chain_to_json(chain)));
    const Eigen::Index n = chain.size();
    const Eigen::MatrixXd er = random_edge_rewards(chain, rng);
    const Eigen::VectorXd r = (chain.p().array() * er.array()).rowwise().sum().matrix();

    {
      const ValueVector u = relative_value(chain, r);
      const ValueVector u_hat{u.values + random_vector(n, 0.5, rng), ValueKind::relative, 1.0};
      const AdvantageIdentity id = advantage_error_identity(chain, u, u_hat, er);
      add_eq(report, "advantage/" + trial_tag(trial) + "/g1", "advantage-square-identity",
             id.lhs, id.rhs, rel * (1.0 + std::abs(id.lhs)));
    }
    for (const double gamma : {0.3, 0.9}) {
      const ValueVector v = value_function(chain, r, gamma);
      const ValueVector v_hat{v.values + random_vector(n, 0.5, rng), ValueKind::discounted,
                              gamma};
      const AdvantageIdentity id = advantage_error_identity(chain, v, v_hat, er);
      add_eq(report, "advantage/" + trial_tag(trial) + "/" + gamma_tag(gamma),
             "advantage-square-identity", id.lhs, id.rhs, rel * (1.0 + std::abs(id.lhs)));
    }
  }
  finish(report);
  return report;
}

VerificationReport pg_bias_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "pg-bias";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 50;
  const std::int64_t fd_trials = std::min<std::int64_t>(20, report.trials);

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_int(6));
    const Eigen::Index max_actions = 2 + static_cast<Eigen::Index>(rng.uniform_int(3));
    Mdp mdp = random_mdp(n, max_actions, rng);
    // A model where every state has exactly one action pins the policy and
    // zeroes every score; redraw until some state has an actual choice.
    while (std::all_of(mdp.actions.begin(), mdp.actions.end(),
                       [](const auto& a) { return a.size() < 2; }))
      mdp = random_mdp(n, max_actions, rng);
    report.instance_hashes.push_back(instance_hash(mdp_to_json(mdp)));

    const SoftmaxPolicy family(mdp);
    const Eigen::VectorXd phi = random_vector(family.param_count(), 0.5, rng);
    const PolicyTable table = family.table(phi);
    const Chain chain = induced_chain(mdp, table);
    const Eigen::VectorXd u = relative_value(chain, expected_reward_vector(mdp, table)).values;
    const Eigen::VectorXd g = random_vector(n, 1.0, rng);
    const std::string tag = "pg-bias/" + trial_tag(trial);

    double min_slack = std::numeric_limits<double>::infinity();
    for (const double lambda : {0.01, 0.1, 1.0})
      min_slack = std::min(min_slack, bias_bound_check(mdp, family, phi, u + lambda * g).slack);
    add_lower(report, tag + "/slack", "gradient-bias-bound", min_slack, 0.0,
              opt.tol > 0.0 ? opt.tol : 1e-10);

    const double lhs_full = bias_bound_check(mdp, family, phi, u + 0.1 * g).lhs;
    const double lhs_half = bias_bound_check(mdp, family, phi, u + 0.05 * g).lhs;
    add_eq(report, tag + "/quadratic", "quadratic-bias-scaling", lhs_full / lhs_half, 4.0,
           0.2);

    const Eigen::VectorXd reference =
        policy_gradient_with_baseline(mdp, family, phi, u + 0.1 * g, Eigen::VectorXd::Zero(n));
    double worst_baseline = 0.0;
    for (int b = 0; b < 10; ++b) {
      const Eigen::VectorXd baseline = random_vector(n, 1.0, rng);
      const Eigen::VectorXd shifted =
          policy_gradient_with_baseline(mdp, family, phi, u + 0.1 * g, baseline);
      worst_baseline = std::max(worst_baseline, (shifted - reference).cwiseAbs().maxCoeff());
    }
    const Eigen::VectorXd with_value =
        policy_gradient_with_baseline(mdp, family, phi, u + 0.1 * g, u);
    worst_baseline = std::max(worst_baseline, (with_value - reference).cwiseAbs().maxCoeff());
    add_upper(report, tag + "/baseline", "baseline-invariance", worst_baseline, 0.0,
              opt.tol > 0.0 ? opt.tol : 1e-12);

    if (trial < fd_trials) {
      const Eigen::VectorXd exact = policy_gradient_exact(mdp, family, phi, Baseline::none);
      Eigen::VectorXd probe = phi;
      Eigen::VectorXd fd(phi.size());
      for (Eigen::Index i = 0; i < phi.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(phi[i]));
        probe[i] = phi[i] + h;
        const double up = average_reward(mdp, family, probe);
        probe[i] = phi[i] - h;
        const double down = average_reward(mdp, family, probe);
        probe[i] = phi[i];
        fd[i] = (up - down) / (2.0 * h);
      }
      const double gap = (exact - fd).cwiseAbs().maxCoeff();
      add_upper(report, tag + "/fd", "policy-gradient-fd", gap, 0.0,
                1e-4 * (1.0 + exact.cwiseAbs().maxCoeff()));
    }
  }
  finish(report);
  return report;
}

VerificationReport metropolis_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "metropolis";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 50;
  const double balance_tol = opt.tol > 0.0 ? opt.tol : 1e-12;

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_int(11));
    const Graph graph =
        random_connected_graph(n, static_cast<Eigen::Index>(rng.uniform_int(n)), rng);

    // Rotate through the three target families.
    Eigen::VectorXd f;
    if (trial % 3 == 0) {
      f = Eigen::VectorXd::Ones(n);
    } else if (trial % 3 == 1) {
      f = Eigen::VectorXd::Ones(n);
      f[static_cast<Eigen::Index>(rng.uniform_int(n))] = 10.0;
      f[static_cast<Eigen::Index>(rng.uniform_int(n))] = 10.0;
    } else {
      f = random_target_weights(n, rng);
    }

    const Chain chain = metropolis_chain(graph, f);
    report.instance_hashes.push_back(instance_hash(chain_to_json(chain)));
    const std::string tag = "metropolis/" + trial_tag(trial);

    double row_dev = 0.0;
    for (Eigen::Index s = 0; s < n; ++s)
      row_dev = std::max(row_dev, std::abs(chain.p().row(s).sum() - 1.0));
    add_upper(report, tag + "/rows", "detailed-balance", row_dev, 0.0, 1e-15);

    add_upper(report, tag + "/balance", "detailed-balance", chain.certificate()->max_violation,
              0.0, balance_tol);

    const Eigen::VectorXd solved = stationary_distribution(Chain(chain.p()));
    const Eigen::VectorXd target = f / f.sum();
    add_upper(report, tag + "/stationary", "stationary-target",
              (solved - target).cwiseAbs().maxCoeff(), 0.0, 1e-12);

    const Chain scaled = metropolis_chain(graph, 0.37 * f);
    add_upper(report, tag + "/scaling", "stationary-target",
              (chain.p() - scaled.p()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  }

  {
    const Graph triangle = complete_graph(3);
    Eigen::VectorXd f(3);
    f << 1.0, 2.0, 1.0;
    const Chain chain = metropolis_chain(triangle, f);
    const double gap =
        std::max(std::abs(chain.p()(0, 1) - 0.5), std::abs(chain.p()(1, 0) - 0.25));
    add_upper(report, "metropolis/triangle", "detailed-balance", gap, 0.0, 0.0);
  }
  finish(report);
  return report;
}

VerificationReport norms_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "norms";
  report.seed = opt.seed;
  report.trials = opt.trials > 0 ? opt.trials : 50;

  Rng rng(opt.seed);
  for (std::int64_t trial = 0; trial < report.trials; ++trial) {
    const Chain chain = random_reversible_chain(2, 12, rng);
    report.instance_hashes.push_back(instance_hash(chain_to_json(chain)));
    const Eigen::Index n = chain.size();
    const Eigen::VectorXd f = random_vector(n, 1.0, rng);
    const Eigen::VectorXd mu = stationary_distribution(chain);
    const std::string tag = "norms/" + trial_tag(trial);

    const SpectralReport spectral = spectral_gap(chain);
    const Eigen::VectorXd centered = (f.array() - mu.dot(f)).matrix();
    const double dir = dirichlet_norm_sq(f, chain);
    const double centered_sq = mu_norm_sq(centered, mu);

    add_upper(report, tag + "/lower", "dirichlet-bounds", spectral.beta * centered_sq, dir,
              1e-10);
    if (spectral.psd)
      add_upper(report, tag + "/upper", "dirichlet-bounds", dir, centered_sq, 1e-10);
    add_upper(report, tag + "/center", "dirichlet-bounds", centered_sq, mu_norm_sq(f, mu),
              1e-12);
    add_eq(report, tag + "/operator-form", "dirichlet-bounds", dirichlet_via_operator(f, chain),
           dir, 1e-12 * (1.0 + dir));
  }

  for (const Eigen::Index n : {Eigen::Index(20), Eigen::Index(50)}) {
    const SpectralReport spectral = spectral_gap(simple_random_walk(cycle_graph(n)));
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(n);
    if (n == 20)
      add_eq(report, "norms/cycle20/beta", "spectral-gap-cycle", spectral.beta,
             1.0 - std::cos(angle), 1e-10);
    const double limit = 2.0 * std::numbers::pi * std::numbers::pi /
                         static_cast<double>(n * n);
    add_eq(report, "norms/cycle" + std::to_string(n) + "/asymptotic", "spectral-gap-cycle",
           spectral.beta / limit, 1.0, 0.05);
  }

  {
    Eigen::MatrixXd p(2, 2);
    p << 0.0, 1.0, 1.0, 0.0;
    const Chain swap(p);
    const SpectralReport spectral = spectral_gap(swap);
    add_eq(report, "norms/swap/beta", "spectral-gap-cycle", spectral.beta, 2.0, 1e-12);

    CheckRecord indefinite;
    indefinite.check_id = "norms/swap/indefinite";
    indefinite.anchor = "dirichlet-bounds";
    indefinite.lhs = spectral.lambda_min;
    indefinite.rhs = 0.0;
    indefinite.gap = spectral.lambda_min;
    indefinite.tolerance = 0.0;
    indefinite.pass = !spectral.psd;
    report.checks.push_back(std::move(indefinite));

    Eigen::VectorXd f(2);
    f << 1.0, -1.0;
    const double dir = dirichlet_norm_sq(f, swap);
    const Eigen::VectorXd mu = stationary_distribution(swap);
    const double centered_sq = mu_norm_sq((f.array() - mu.dot(f)).matrix(), mu);
    CheckRecord counter;
    counter.check_id = "norms/swap/upper-counterexample";
    counter.anchor = "dirichlet-bounds";
    counter.lhs = dir;
    counter.rhs = centered_sq;
    counter.gap = dir - centered_sq;
    counter.tolerance = 0.5;
    counter.pass = dir >= centered_sq + 0.5;  // the upper bound must fail here
    report.checks.push_back(std::move(counter));
  }
  finish(report);
  return report;
}

Eigen::VectorXd gaussian_bump(const GridSpec& spec, double center, double sigma) {
  const Eigen::Index count = grid_node_count(spec);
  Eigen::VectorXd f(count);
  for (Eigen::Index node = 0; node < count; ++node) {
    double sq = 0.0;
    for (int k = 0; k < spec.dim; ++k) {
      const double d = grid_position(spec, node, k) - center;
      sq += d * d;
    }
    f[node] = std::exp(-sq / (2.0 * sigma * sigma));
  }
  return f;
}

VerificationReport grid_suite(const SuiteOptions& opt) {
  VerificationReport report;
  report.suite = "grid";
  report.seed = opt.seed;
  report.trials = 0;  // fixed checks, no random instances

  const GridSpec coarse{1, 0.01, 101};
  const GridSpec fine{1, 0.005, 201};
  const GridTaylorResult coarse_result =
      grid_taylor_check(gaussian_bump(coarse, 0.5, 0.05), coarse);
  const GridTaylorResult fine_result = grid_taylor_check(gaussian_bump(fine, 0.5, 0.05), fine);

  add_eq(report, "grid/d1/eps0.01", "grid-dirichlet-taylor", coarse_result.ratio, 1.0,
         10.0 * coarse.eps);
  add_eq(report, "grid/d1/eps0.005", "grid-dirichlet-taylor", fine_result.ratio, 1.0,
         10.0 * fine.eps);

  const double shrink =
      std::abs(coarse_result.ratio - 1.0) / std::abs(fine_result.ratio - 1.0);
  add_lower(report, "grid/d1/refinement", "grid-dirichlet-taylor", shrink, 1.5, 0.0);

  const GridSpec plane{2, 0.02, 51};
  const GridTaylorResult plane_result =
      grid_taylor_check(gaussian_bump(plane, 0.5, 0.055), plane);
  add_eq(report, "grid/d2/eps0.02", "grid-dirichlet-taylor", plane_result.ratio, 1.0,
         10.0 * plane.eps);

  const Chain small = grid_walk_chain({2, 0.1, 5});
  add_upper(report, "grid/d2/certificate", "detailed-balance",
            small.certificate()->max_violation, 0.0, 1e-15);

  const GridSpec tiny{1, 0.01, 101};
  const GridTaylorResult zero =
      grid_taylor_check(Eigen::VectorXd::Zero(grid_node_count(tiny)), tiny);
  add_eq(report, "grid/d1/zero-field", "grid-dirichlet-taylor", zero.ratio, 1.0, 0.0);

  bool guarded = false;
  try {
    grid_taylor_check(Eigen::VectorXd::Ones(grid_node_count(tiny)), tiny);
  } catch (const std::invalid_argument&) {
    guarded = true;
  }
  CheckRecord guard;
  guard.check_id = "grid/d1/boundary-guard";
  guard.anchor = "grid-dirichlet-taylor";
  guard.lhs = guarded ? 1.0 : 0.0;
  guard.rhs = 1.0;
  guard.gap = guarded ? 0.0 : 1.0;
  guard.tolerance = 0.0;
  guard.pass = guarded;
  report.checks.push_back(std::move(guard));

  finish(report);
  return report;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"theorem1", "theorem2", "advantage", "pg-bias", "metropolis", "grid", "norms"};
}

VerificationReport run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "theorem1")
    return theorem1_suite(options);
  if (name == "theorem2")
    return theorem2_suite(options);
  if (name == "advantage")
    return advantage_suite(options);
  if (name == "pg-bias")
    return pg_bias_suite(options);
  if (name == "metropolis")
    return metropolis_suite(options);
  if (name == "grid")
    return grid_suite(options);
  if (name == "norms")
    return norms_suite(options);
  throw std::invalid_argument("run_suite: unknown suite '" + name +
                              "'; expected one of theorem1, theorem2, advantage, pg-bias, "
                              "metropolis, grid, norms");
}

std::vector<VerificationReport> run_all_suites(const SuiteOptions& options) {
  std::vector<VerificationReport> reports;
  for (const std::string& name : suite_names())
    reports.push_back(run_suite(name, options));
  return reports;
}

bool all_pass(const VerificationReport& report, const std::string& check_id_prefix) {
  const auto [passed, failed] = pass_fail_counts(report, check_id_prefix);
  return failed == 0 && passed > 0;
}

std::pair<int, int> pass_fail_counts(const VerificationReport& report,
                                     const std::string& check_id_prefix) {
  int passed = 0, failed = 0;
  for (const CheckRecord& check : report.checks)
    if (check.check_id.rfind(check_id_prefix, 0) == 0)
      (check.pass ? passed : failed) += 1;
  return {passed, failed};
}

ControlGapStats nonreversible_control_gaps(std::uint64_t seed, int draws, double threshold) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
  p(0, 1) = 1.0;
  p(1, 2) = 1.0;
  p(2, 0) = 1.0;
  const Chain cycle(p);
  const Eigen::VectorXd r = Eigen::VectorXd::Zero(3);
  const auto tabular = make_tabular(3);

  ControlGapStats stats;
  stats.total = draws;
  stats.min_gap = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int draw = 0; draw < draws; ++draw) {
    const Eigen::VectorXd theta = random_vector(3, 1.0, rng);
    const double gap = theorem1_gap(*tabular, theta, cycle, r, 0.9).gap_inf_norm;
    stats.min_gap = std::min(stats.min_gap, gap);
    stats.max_gap = std::max(stats.max_gap, gap);
    if (gap > threshold)
      ++stats.exceeding;
  }
  return stats;
}

NavigationFixture six_node_fixture() {
  Graph graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5},
                  {0, 2}, {1, 3}, {2, 4}, {3, 5}, {0, 5}});
  Eigen::VectorXd f(6);
  f << 1.0, 2.0, 0.5, 1.5, 1.0, 3.0;
  Chain chain = metropolis_chain(graph, f);

  Rng reward_rng(777);
  Eigen::MatrixXd edge_reward = Eigen::MatrixXd::Zero(6, 6);
  for (Eigen::Index s = 0; s < 6; ++s)
    for (Eigen::Index t = 0; t < 6; ++t)
      if (chain.p()(s, t) > 0.0)
        edge_reward(s, t) = reward_rng.uniform(-2.0, 2.0);

  Rng feature_rng(778);
  Eigen::MatrixXd features = random_matrix(6, 2, 1.0, feature_rng);
  NavigationMdp nav = navigation_mdp_from_chain(chain, edge_reward);
  return NavigationFixture{std::move(nav.mdp),     std::move(nav.policy),
                           std::move(chain),       std::move(edge_reward),
                           std::move(features),    std::move(graph)};
}

}
