#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tdlab/rng.hpp"

namespace tdlab {

// One action available in some state: a sparse transition kernel over next
// states, plus the mean reward attached to each transition the kernel can take.
struct ActionModel {
  std::string name;
  std::vector<std::pair<Eigen::Index, double>> kernel;   // (next state, probability)
  std::vector<std::pair<Eigen::Index, double>> rewards;  // (next state, mean reward)
};

// Finite state and action space, sparse kernels, optional Gaussian reward noise.
struct Mdp {
  Eigen::Index n_states = 0;
  std::vector<std::vector<ActionModel>> actions;  // indexed [state][action]
  double reward_noise_std = 0.0;

  Eigen::Index action_count(Eigen::Index s) const;
  // Mean reward of the jump (s, a) -> next. Throws if the action reaches next
  // with positive probability but carries no reward entry for it.
  double mean_reward(Eigen::Index s, Eigen::Index a, Eigen::Index next) const;
};

// Action probabilities per state; probs[s] has one entry per action of state s.
struct PolicyTable {
  std::vector<Eigen::VectorXd> probs;
};

// Outcome of testing detailed balance mu(s) p(s,s') = mu(s') p(s',s).
struct ReversibilityCertificate {
  double tolerance = 0.0;
  double max_violation = 0.0;
  bool structural_ok = false;  // support of p is symmetric
  std::vector<std::pair<Eigen::Index, Eigen::Index>> one_way_edges;
  bool pass = false;
};

// Row-stochastic transition matrix. A stationary distribution and a
// reversibility certificate ride along when the builder knows them.
class Chain {
public:
  explicit Chain(Eigen::MatrixXd p);
  Chain(Eigen::MatrixXd p, Eigen::VectorXd mu);
  Chain(Eigen::MatrixXd p, Eigen::VectorXd mu, ReversibilityCertificate certificate);

  Eigen::Index size() const { return p_.rows(); }
  const Eigen::MatrixXd& p() const { return p_; }
  const std::optional<Eigen::VectorXd>& cached_mu() const { return mu_; }
  const std::optional<ReversibilityCertificate>& certificate() const { return certificate_; }

private:
  Eigen::MatrixXd p_;
  std::optional<Eigen::VectorXd> mu_;
  std::optional<ReversibilityCertificate> certificate_;
};

struct Transition {
  Eigen::Index action = 0;
  Eigen::Index next = 0;
  double reward = 0.0;
};

// One violated invariant found by validate_mdp.
struct Diagnostic {
  std::string location;  // e.g. "states[2].actions[0]"
  std::string message;
};

// Collects every problem instead of stopping at the first: bad sizes, kernel
// rows off 1, negative or out-of-range entries, transitions without rewards.
std::vector<Diagnostic> validate_mdp(const Mdp& mdp);

// Throws std::invalid_argument when the policy does not fit the mdp or some
// row is not a probability vector.
void check_policy(const Mdp& mdp, const PolicyTable& policy);

// State chain p(s,s') = sum_a policy(s,a) kernel(s,a,s').
Chain induced_chain(const Mdp& mdp, const PolicyTable& policy);

// R(s) = sum_a policy(s,a) sum_s' kernel(s,a,s') reward(s,a,s').
Eigen::VectorXd expected_reward_vector(const Mdp& mdp, const PolicyTable& policy);

// Mean reward conditioned on the realized jump s -> s' under the policy.
// Defined wherever the induced chain puts positive mass, zero elsewhere.
Eigen::MatrixXd edge_reward_matrix(const Mdp& mdp, const PolicyTable& policy);

// Draws action, next state and a reward (mean plus optional Gaussian noise).
Transition sample_transition(const Mdp& mdp, const PolicyTable& policy, Eigen::Index s, Rng& rng);

}
