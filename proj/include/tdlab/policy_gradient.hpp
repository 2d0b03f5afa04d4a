#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"

namespace tdlab {

// Softmax policies over the action sets of a fixed mdp. Logits live in one
// flat vector, state blocks in order: the block of state s starts at offset(s)
// and has one entry per action.
class SoftmaxPolicy {
public:
  explicit SoftmaxPolicy(const Mdp& mdp);

  Eigen::Index param_count() const { return dim_; }
  Eigen::Index offset(Eigen::Index s) const;
  Eigen::Index block_size(Eigen::Index s) const;

  Eigen::VectorXd probs(const Eigen::VectorXd& phi, Eigen::Index s) const;
  PolicyTable table(const Eigen::VectorXd& phi) const;

  // Gradient of log pi(s, a) in the full logit vector; zero outside block s.
  Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& phi, Eigen::Index s, Eigen::Index a) const;

private:
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dim_ = 0;
};

// Stationary law of one step: xi[s](a, s') = mu(s) pi(s, a) kernel(s, a, s').
struct TransitionDistribution {
  std::vector<Eigen::MatrixXd> xi;
  double total() const;
};

TransitionDistribution transition_distribution(const Mdp& mdp, const SoftmaxPolicy& family,
                                               const Eigen::VectorXd& phi);

enum class Baseline { none, value };

// Stationary mean reward of the policy with logits phi.
double average_reward(const Mdp& mdp, const SoftmaxPolicy& family, const Eigen::VectorXd& phi);

// Gradient of the average reward in the logits, written as the stationary
// expectation of (reward + u(s') - baseline(s)) times the score of (s, a),
// with u the exact relative value. The value baseline subtracts u(s).
Eigen::VectorXd policy_gradient_exact(const Mdp& mdp, const SoftmaxPolicy& family,
                                      const Eigen::VectorXd& phi, Baseline baseline);

// Same expectation with a supplied substitute u_hat for the relative value.
Eigen::VectorXd approx_policy_gradient(const Mdp& mdp, const SoftmaxPolicy& family,
                                       const Eigen::VectorXd& phi, const Eigen::VectorXd& u_hat,
                                       Baseline baseline);

// The expectation with both u and the per-state baseline chosen freely.
Eigen::VectorXd policy_gradient_with_baseline(const Mdp& mdp, const SoftmaxPolicy& family,
                                              const Eigen::VectorXd& phi,
                                              const Eigen::VectorXd& u,
                                              const Eigen::VectorXd& baseline);

// Stationary mean squared score norm, sum_s mu(s) sum_a pi(s,a) |score|^2.
double fisher_trace(const Mdp& mdp, const SoftmaxPolicy& family, const Eigen::VectorXd& phi);

struct BiasBound {
  double lhs = 0.0;    // squared norm of the gradient error
  double rhs = 0.0;    // 2 Dir(u - u_hat) times the fisher trace
  double slack = 0.0;  // rhs - lhs
};

// Checks the bias bound |grad_hat - grad|^2 <= 2 Dir(u - u_hat) tr(Fisher).
BiasBound bias_bound_check(const Mdp& mdp, const SoftmaxPolicy& family,
                           const Eigen::VectorXd& phi, const Eigen::VectorXd& u_hat);

}
