#include "tdlab/policy_gradient.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tdlab/chain_analysis.hpp"
#include "tdlab/value.hpp"

namespace tdlab {

SoftmaxPolicy::SoftmaxPolicy(const Mdp& mdp) {
  if (mdp.n_states < 1)
    throw std::invalid_argument("SoftmaxPolicy: mdp has no states");
  offsets_.reserve(mdp.n_states + 1);
  offsets_.push_back(0);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    const Eigen::Index count = mdp.action_count(s);
    if (count < 1)
      throw std::invalid_argument("SoftmaxPolicy: state " + std::to_string(s) +
                                  " has no actions");
    offsets_.push_back(offsets_.back() + count);
  }
  dim_ = offsets_.back();
}

Eigen::Index SoftmaxPolicy::offset(Eigen::Index s) const {
  if (s < 0 || s + 1 >= static_cast<Eigen::Index>(offsets_.size()))
    throw std::invalid_argument("SoftmaxPolicy::offset: state " + std::to_string(s) +
                                " out of range");
  return offsets_[s];
}

Eigen::Index SoftmaxPolicy::block_size(Eigen::Index s) const {
  return offsets_[s + 1] - offset(s);
}

Eigen::VectorXd SoftmaxPolicy::probs(const Eigen::VectorXd& phi, Eigen::Index s) const {
  if (phi.size() != dim_)
    throw std::invalid_argument("SoftmaxPolicy: logit vector has size " +
                                std::to_string(phi.size()) + ", expected " +
                                std::to_string(dim_));
  const Eigen::VectorXd block = phi.segment(offset(s), block_size(s));
  const Eigen::ArrayXd shifted = block.array() - block.maxCoeff();
  const Eigen::ArrayXd weights = shifted.exp();
  return (weights / weights.sum()).matrix();
}

PolicyTable SoftmaxPolicy::table(const Eigen::VectorXd& phi) const {
  PolicyTable policy;
  policy.probs.reserve(offsets_.size() - 1);
  for (Eigen::Index s = 0; s + 1 < static_cast<Eigen::Index>(offsets_.size()); ++s)
    policy.probs.push_back(probs(phi, s));
  return policy;
}

Eigen::VectorXd SoftmaxPolicy::log_prob_grad(const Eigen::VectorXd& phi, Eigen::Index s,
                                             Eigen::Index a) const {
  const Eigen::VectorXd pi = probs(phi, s);
  if (a < 0 || a >= pi.size())
    throw std::invalid_argument("SoftmaxPolicy::log_prob_grad: action " + std::to_string(a) +
                                " out of range for state " + std::to_string(s));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  g.segment(offset(s), pi.size()) = -pi;
  g[offset(s) + a] += 1.0;
  return g;
}

namespace {

struct PolicyContext {
  PolicyTable table;
  Chain chain;
  Eigen::VectorXd mu;
};

PolicyContext make_context(const Mdp& mdp, const SoftmaxPolicy& family,
                           const Eigen::VectorXd& phi) {
  PolicyTable table = family.table(phi);
  Chain chain = induced_chain(mdp, table);
  Eigen::VectorXd mu = stationary_distribution(chain);
  return {std::move(table), std::move(chain), std::move(mu)};
}

}  // namespace

double TransitionDistribution::total() const {
  double sum = 0.0;
  for (const Eigen::MatrixXd& block : xi)
    sum += block.sum();
  return sum;
}

TransitionDistribution transition_distribution(const Mdp& mdp, const SoftmaxPolicy& family,
                                               const Eigen::VectorXd& phi) {
  const PolicyContext ctx = make_context(mdp, family, phi);
  TransitionDistribution out;
  out.xi.reserve(mdp.n_states);
  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(mdp.action_count(s), mdp.n_states);
    for (Eigen::Index a = 0; a < mdp.action_count(s); ++a)
      for (const auto& [t, q] : mdp.actions[s][a].kernel)
        block(a, t) += ctx.mu[s] * ctx.table.probs[s][a] * q;
    out.xi.push_back(std::move(block));
  }
  return out;
}

double average_reward(const Mdp& mdp, const SoftmaxPolicy& family, const Eigen::VectorXd& phi) {
  const PolicyContext ctx = make_context(mdp, family, phi);
  return ctx.mu.dot(expected_reward_vector(mdp, ctx.table));
}

Eigen::VectorXd policy_gradient_with_baseline(const Mdp& mdp, const SoftmaxPolicy& family,
                                              const Eigen::VectorXd& phi,
                                              const Eigen::VectorXd& u,
                                              const Eigen::VectorXd& baseline) {
  if (u.size() != mdp.n_states || baseline.size() != mdp.n_states)
    throw std::invalid_argument(
        "policy_gradient_with_baseline: u and baseline must have one entry per state");
  const PolicyContext ctx = make_context(mdp, family, phi);

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(family.param_count());
  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    const Eigen::VectorXd& pi = ctx.table.probs[s];
    for (Eigen::Index a = 0; a < mdp.action_count(s); ++a) {
      const double mass = ctx.mu[s] * pi[a];
      if (mass == 0.0)
        continue;
      double inner = 0.0;
      for (const auto& [t, q] : mdp.actions[s][a].kernel)
        if (q > 0.0)
          inner += q * (mdp.mean_reward(s, a, t) + u[t] - baseline[s]);
      acc += mass * inner * family.log_prob_grad(phi, s, a);
    }
  }
  return acc;
}

Eigen::VectorXd policy_gradient_exact(const Mdp& mdp, const SoftmaxPolicy& family,
                                      const Eigen::VectorXd& phi, Baseline baseline) {
  const PolicyContext ctx = make_context(mdp, family, phi);
  const Eigen::VectorXd u =
      relative_value(ctx.chain, expected_reward_vector(mdp, ctx.table)).values;
  const Eigen::VectorXd b =
      baseline == Baseline::value ? u : Eigen::VectorXd::Zero(mdp.n_states).eval();
  return policy_gradient_with_baseline(mdp, family, phi, u, b);
}

Eigen::VectorXd approx_policy_gradient(const Mdp& mdp, const SoftmaxPolicy& family,
                                       const Eigen::VectorXd& phi, const Eigen::VectorXd& u_hat,
                                       Baseline baseline) {
  const Eigen::VectorXd b =
      baseline == Baseline::value ? u_hat : Eigen::VectorXd::Zero(mdp.n_states).eval();
  return policy_gradient_with_baseline(mdp, family, phi, u_hat, b);
}

double fisher_trace(const Mdp& mdp, const SoftmaxPolicy& family, const Eigen::VectorXd& phi) {
  const PolicyContext ctx = make_context(mdp, family, phi);
  double acc = 0.0;
  for (Eigen::Index s = 0; s < mdp.n_states; ++s) {
    const Eigen::VectorXd& pi = ctx.table.probs[s];
    for (Eigen::Index a = 0; a < pi.size(); ++a) {
      if (pi[a] == 0.0)
        continue;
      // |score|^2 restricted to block s: sum_b (1[b = a] - pi_b)^2.
      const double score_sq = (1.0 - 2.0 * pi[a]) + pi.squaredNorm();
      acc += ctx.mu[s] * pi[a] * score_sq;
    }
  }
  return acc;
}

BiasBound bias_bound_check(const Mdp& mdp, const SoftmaxPolicy& family,
                           const Eigen::VectorXd& phi, const Eigen::VectorXd& u_hat) {
  const PolicyContext ctx = make_context(mdp, family, phi);
  const Eigen::VectorXd u =
      relative_value(ctx.chain, expected_reward_vector(mdp, ctx.table)).values;

  const Eigen::VectorXd exact = policy_gradient_with_baseline(
      mdp, family, phi, u, Eigen::VectorXd::Zero(mdp.n_states));
  const Eigen::VectorXd approx = policy_gradient_with_baseline(
      mdp, family, phi, u_hat, Eigen::VectorXd::Zero(mdp.n_states));

  BiasBound out;
  out.lhs = (approx - exact).squaredNorm();
  out.rhs = 2.0 * dirichlet_norm_sq(u - u_hat, ctx.chain) * fisher_trace(mdp, family, phi);
  out.slack = out.rhs - out.lhs;
  return out;
}

}
