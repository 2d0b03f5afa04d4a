#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"
#include "tdlab/reversible.hpp"

namespace tdlab {

struct CheckRecord {
  std::string check_id;
  std::string anchor;  // which identity or bound the check exercises
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::vector<std::string> instance_hashes;
  std::vector<CheckRecord> checks;
  bool pass = false;  // conjunction of all checks
};

struct SuiteOptions {
  std::int64_t trials = 0;   // 0 keeps the suite default
  std::uint64_t seed = 20260816;
  double tol = 0.0;          // 0 keeps per-check defaults
};

// Suites: theorem1, theorem2, advantage, pg-bias, metropolis, grid, norms.
std::vector<std::string> suite_names();
VerificationReport run_suite(const std::string& name, const SuiteOptions& options);
std::vector<VerificationReport> run_all_suites(const SuiteOptions& options);

bool all_pass(const VerificationReport& report, const std::string& check_id_prefix);
// (passed, failed) among checks whose id starts with the prefix.
std::pair<int, int> pass_fail_counts(const VerificationReport& report,
                                     const std::string& check_id_prefix);

// Gap statistics of the discounted comparison on the directed 3-cycle with a
// tabular family, over random parameter draws.
struct ControlGapStats {
  int total = 0;
  int exceeding = 0;  // draws with gap above the threshold
  double min_gap = 0.0;
  double max_gap = 0.0;
};

ControlGapStats nonreversible_control_gaps(std::uint64_t seed, int draws, double threshold);

// Deterministic 6-state fixture shared by the stochastic checks: a metropolis
// chain on a 6-vertex graph wrapped as a navigation mdp, with seeded edge
// rewards and a 6x2 feature matrix.
struct NavigationFixture {
  Mdp mdp;
  PolicyTable policy;
  Chain chain;
  Eigen::MatrixXd edge_reward;
  Eigen::MatrixXd features;
  Graph graph;
};

NavigationFixture six_node_fixture();

}
