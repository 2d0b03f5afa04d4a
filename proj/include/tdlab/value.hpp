#pragma once

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"

namespace tdlab {

enum class ValueKind { discounted, relative };

struct ValueVector {
  Eigen::VectorXd values;
  ValueKind kind = ValueKind::discounted;
  double gamma = 0.0;  // 1 for the relative kind
};

// Solves (I - gamma p) v = r for gamma in [0, 1). Directs callers to
// relative_value at gamma = 1, where the system is singular.
ValueVector value_function(const Chain& chain, const Eigen::VectorXd& r, double gamma);

// Relative values of an irreducible chain: (I - p) u = r - avg with the
// normalization <mu, u> = 0, where avg is the stationary mean reward.
ValueVector relative_value(const Chain& chain, const Eigen::VectorXd& r);

double average_reward_scalar(const Eigen::VectorXd& r, const Eigen::VectorXd& mu);

// Advantage of the realized jump s -> s' over the current value, defined on
// the support of the chain.
class AdvantageMatrix {
public:
  AdvantageMatrix(Eigen::MatrixXd a, Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support,
                  double gamma);

  Eigen::Index size() const { return a_.rows(); }
  double gamma() const { return gamma_; }
  bool on_support(Eigen::Index s, Eigen::Index next) const;
  // Throws std::out_of_range when the pair carries no transition mass.
  double at(Eigen::Index s, Eigen::Index next) const;
  const Eigen::MatrixXd& raw() const { return a_; }

private:
  Eigen::MatrixXd a_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support_;
  double gamma_;
};

// a(s'|s) = edge_reward(s,s') + gamma v(s') - v(s), with gamma = 1 for
// relative values. edge_reward must give the mean reward of each supported jump.
AdvantageMatrix state_advantage(const Chain& chain, const ValueVector& value,
                                const Eigen::MatrixXd& edge_reward);

struct AdvantageIdentity {
  double lhs = 0.0;           // sum_{s,s'} mu(s) p(s,s') (a - a_hat)^2
  double rhs = 0.0;           // matching combination of Dirichlet and mu norms
  double dir_norm_sq = 0.0;   // Dirichlet part of the right side
  double mu_norm_sq = 0.0;    // mu part of the right side (zero at gamma = 1)
};

// Squared advantage mismatch between two value vectors of the same kind,
// against its closed form: 2 Dir(v - v_hat) at gamma = 1, and
// 2 gamma Dir(v - v_hat) + (1 - gamma)^2 |v - v_hat|_mu^2 below 1.
AdvantageIdentity advantage_error_identity(const Chain& chain, const ValueVector& value_true,
                                           const ValueVector& value_approx,
                                           const Eigen::MatrixXd& edge_reward);

}
