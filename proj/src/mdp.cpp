#include "tdlab/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdlab {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string state_action(Eigen::Index s, Eigen::Index a) {
  return "states[" + std::to_string(s) + "].actions[" + std::to_string(a) + "]";
}

void check_square_stochastic(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols())
    throw std::invalid_argument("Chain: matrix must be square, got " + std::to_string(p.rows()) +
                                "x" + std::to_string(p.cols()));
  if (p.rows() == 0)
    throw std::invalid_argument("Chain: matrix must be nonempty");
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    for (Eigen::Index t = 0; t < p.cols(); ++t)
      if (p(s, t) < 0.0)
        throw std::invalid_argument("Chain: negative entry p(" + std::to_string(s) + ", " +
                                    std::to_string(t) + ") = " + std::to_string(p(s, t)));
    const double sum = p.row(s).sum();
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw std::invalid_argument("Chain: row " + std::to_string(s) + " sums to " +
                                  std::to_string(sum) + ", expected 1");
  }
}

void check_distribution(const Eigen::VectorXd& mu, Eigen::Index n) {
  if (mu.size() != n)
    throw std::invalid_argument("Chain: mu has size " + std::to_string(mu.size()) +
                                ", expected " + std::to_string(n));
  for (Eigen::Index s = 0; s < n; ++s)
    if (mu[s] < 0.0)
      throw std::invalid_argument("Chain: negative mu(" + std::to_string(s) + ")");
  if (std::abs(mu.sum() - 1.0) > kRowSumTol)
    throw std::invalid_argument("Chain: mu sums to " + std::to_string(mu.sum()) + ", expected 1");
}

}  // namespace

Chain::Chain(Eigen::MatrixXd p) : p_(std::move(p)) { check_square_stochastic(p_); }

Chain::Chain(Eigen::MatrixXd p, Eigen::VectorXd mu) : p_(std::move(p)), mu_(std::move(mu)) {
  check_square_stochastic(p_);
  check_distribution(*mu_, p_.rows());
}

Chain::Chain(Eigen::MatrixXd p, Eigen::VectorXd mu, ReversibilityCertificate certificate)
    : p_(std::move(p)), mu_(std::move(mu)), certificate_(std::move(certificate)) {
  check_square_stochastic(p_);
  check_distribution(*mu_, p_.rows());
}

Eigen::Index Mdp::action_count(Eigen::Index s) const {
  if (s < 0 || s >= static_cast<Eigen::Index>(actions.size()))
    throw std::invalid_argument("Mdp::action_count: state " + std::to_string(s) +
                                " out of range");
  return static_cast<Eigen::Index>(actions[s].size());
}

double Mdp::mean_reward(Eigen::Index s, Eigen::Index a, Eigen::Index next) const {
  if (s < 0 || s >= static_cast<Eigen::Index>(actions.size()) || a < 0 ||
      a >= action_count(s))
    throw std::invalid_argument("Mdp::mean_reward: no action " + std::to_string(a) +
                                " in state " + std::to_string(s));
  for (const auto& [t, r] : actions[s][a].rewards)
    if (t == next)
      return r;
  throw std::invalid_argument("Mdp::mean_reward: " + state_action(s, a) +
                              " has no reward entry for next state " + std::to_string(next) +
                              "; run validate_mdp on the model");
}

std::vector<Diagnostic> validate_mdp(const Mdp& mdp) {
  std::vector<Diagnostic> out;
  if (mdp.n_states < 1) {
    out.push_back({"n_states", "must be at least 1, got " + std::to_string(mdp.n_states)});
    return out;
  }
  if (static_cast<Eigen::Index>(mdp.actions.size()) != mdp.n_states) {
    out.push_back({"states", "expected " + std::to_string(mdp.n_states) + " entries, got " +
                                 std::to_string(mdp.actions.size())});
    return out;
  }
  if (mdp.reward_noise_std < 0.0)
    out.push_back({"reward_noise_std", "must be nonnegative"});

  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    if (mdp.actions[s].empty()) {
      out.push_back({"states[" + std::to_string(s) + "]", "state has no actions"});
      continue;
    }
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(mdp.actions[s].size()); ++a) {
      const ActionModel& model = mdp.actions[s][a];
      const std::string loc = state_action(s, a);
      double sum = 0.0;
      std::vector<bool> seen(mdp.n_states, false);
      bool indexable = true;
      for (const auto& [t, p] : model.kernel) {
        if (t < 0 || t >= mdp.n_states) {
          out.push_back({loc, "kernel entry points to state " + std::to_string(t) +
                                  ", out of range"});
          indexable = false;
          continue;
        }
        if (seen[t])
          out.push_back({loc, "kernel lists next state " + std::to_string(t) + " twice"});
        seen[t] = true;
        if (p < 0.0)
          out.push_back({loc, "negative probability " + std::to_string(p) + " for next state " +
                                  std::to_string(t)});
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        out.push_back({loc, "kernel sums to " + std::to_string(sum) + ", expected 1"});

      if (!indexable)
        continue;
      std::vector<bool> rewarded(mdp.n_states, false);
      for (const auto& [t, r] : model.rewards) {
        (void)r;
        if (t < 0 || t >= mdp.n_states) {
          out.push_back({loc, "reward entry points to state " + std::to_string(t) +
                                  ", out of range"});
          continue;
        }
        rewarded[t] = true;
      }
      for (const auto& [t, p] : model.kernel)
        if (p > 0.0 && !rewarded[t])
          out.push_back({loc, "transition to state " + std::to_string(t) + " has probability " +
                                  std::to_string(p) + " but no reward entry"});
    }
  }
  return out;
}

void check_policy(const Mdp& mdp, const PolicyTable& policy) {
  if (static_cast<Eigen::Index>(policy.probs.size()) != mdp.n_states)
    throw std::invalid_argument("check_policy: policy covers " +
                                std::to_string(policy.probs.size()) + " states, mdp has " +
                                std::to_string(mdp.n_states));
  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    const Eigen::VectorXd& row = policy.probs[s];
    if (row.size() != mdp.action_count(s))
      throw std::invalid_argument("check_policy: state " + std::to_string(s) + " has " +
                                  std::to_string(mdp.action_count(s)) + " actions, policy row has " +
                                  std::to_string(row.size()) + " entries");
    for (Eigen::Index a = 0; a < row.size(); ++a)
      if (row[a] < 0.0)
        throw std::invalid_argument("check_policy: negative probability at state " +
                                    std::to_string(s) + " action " + std::to_string(a));
    if (std::abs(row.sum() - 1.0) > kRowSumTol)
      throw std::invalid_argument("check_policy: probabilities in state " + std::to_string(s) +
                                  " sum to " + std::to_string(row.sum()) + ", expected 1");
  }
}

Chain induced_chain(const Mdp& mdp, const PolicyTable& policy) {
  check_policy(mdp, policy);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    for (Eigen::Index a = 0; a < mdp.action_count(s); ++a) {
      const double pa = policy.probs[s][a];
      if (pa == 0.0)
        continue;
      for (const auto& [t, q] : mdp.actions[s][a].kernel) {
        if (t < 0 || t >= mdp.n_states)
          throw std::invalid_argument("induced_chain: " + state_action(s, a) +
                                      " reaches out-of-range state " + std::to_string(t));
        p(s, t) += pa * q;
      }
    }
  return Chain(std::move(p));
}

Eigen::VectorXd expected_reward_vector(const Mdp& mdp, const PolicyTable& policy) {
  check_policy(mdp, policy);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    for (Eigen::Index a = 0; a < mdp.action_count(s); ++a) {
      const double pa = policy.probs[s][a];
      if (pa == 0.0)
        continue;
      for (const auto& [t, q] : mdp.actions[s][a].kernel)
        if (q > 0.0)
          r[s] += pa * q * mdp.mean_reward(s, a, t);
    }
  return r;
}

Eigen::MatrixXd edge_reward_matrix(const Mdp& mdp, const PolicyTable& policy) {
  check_policy(mdp, policy);
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
  Eigen::MatrixXd den = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    for (Eigen::Index a = 0; a < mdp.action_count(s); ++a) {
      const double pa = policy.probs[s][a];
      if (pa == 0.0)
        continue;
      for (const auto& [t, q] : mdp.actions[s][a].kernel)
        if (q > 0.0) {
          num(s, t) += pa * q * mdp.mean_reward(s, a, t);
          den(s, t) += pa * q;
        }
    }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s)
    for (Eigen::Index t = 0; t < mdp.n_states; ++t)
      if (den(s, t) > 0.0)
        out(s, t) = num(s, t) / den(s, t);
  return out;
}

Transition sample_transition(const Mdp& mdp, const PolicyTable& policy, Eigen::Index s,
                             Rng& rng) {
  if (s < 0 || s >= mdp.n_states)
    throw std::invalid_argument("sample_transition: state " + std::to_string(s) +
                                " out of range");
  const Eigen::Index a = rng.categorical(policy.probs[s]);
  const ActionModel& model = mdp.actions[s][a];

  const double u = rng.uniform();
  double acc = 0.0;
  Eigen::Index next = -1;
  for (const auto& [t, q] : model.kernel) {
    if (q <= 0.0)
      continue;
    acc += q;
    next = t;
    if (u < acc)
      break;
  }
  if (next < 0)
    throw std::invalid_argument("sample_transition: " + state_action(s, a) +
                                " has no positive kernel mass");

  double reward = mdp.mean_reward(s, a, next);
  if (mdp.reward_noise_std > 0.0)
    reward += mdp.reward_noise_std * rng.normal();
  return {a, next, reward};
}

}
