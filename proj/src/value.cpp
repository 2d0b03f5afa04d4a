#include "tdlab/value.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tdlab/chain_analysis.hpp"

namespace tdlab {

namespace {

constexpr double kResidualTol = 1e-10;

void check_sizes(const Chain& chain, const Eigen::VectorXd& r, const char* who) {
  if (r.size() != chain.size())
    throw std::invalid_argument(std::string(who) + ": reward vector has size " +
                                std::to_string(r.size()) + ", chain has " +
                                std::to_string(chain.size()) + " states");
}

}  // namespace

ValueVector value_function(const Chain& chain, const Eigen::VectorXd& r, double gamma) {
  check_sizes(chain, r, "value_function");
  if (gamma < 0.0)
    throw std::invalid_argument("value_function: gamma must be nonnegative");
  if (gamma >= 1.0)
    throw std::invalid_argument(
        "value_function: gamma must be below 1; use relative_value for the average-reward case");

  const Eigen::Index n = chain.size();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - gamma * chain.p();
  const Eigen::VectorXd v = a.partialPivLu().solve(r);

  const double residual = (r + gamma * (chain.p() * v) - v).cwiseAbs().maxCoeff();
  if (residual > kResidualTol)
    throw std::runtime_error("value_function: solve left residual " + std::to_string(residual));
  return {v, ValueKind::discounted, gamma};
}

ValueVector relative_value(const Chain& chain, const Eigen::VectorXd& r) {
  check_sizes(chain, r, "relative_value");
  const Eigen::Index n = chain.size();
  const Eigen::VectorXd mu = stationary_distribution(chain);
  const double avg = mu.dot(r);

  // (I - p) u = r - avg pinned down by <mu, u> = 0, solved as one stacked
  // least-squares system.
  Eigen::MatrixXd a(n + 1, n);
  a.topRows(n) = Eigen::MatrixXd::Identity(n, n) - chain.p();
  a.row(n) = mu.transpose();
  Eigen::VectorXd b(n + 1);
  b.head(n) = r.array() - avg;
  b[n] = 0.0;
  const Eigen::VectorXd u = a.colPivHouseholderQr().solve(b);

  const double residual =
      ((Eigen::MatrixXd::Identity(n, n) - chain.p()) * u - b.head(n)).cwiseAbs().maxCoeff();
  if (residual > kResidualTol || std::abs(mu.dot(u)) > kResidualTol)
    throw std::runtime_error("relative_value: solve left residual " +
                             std::to_string(std::max(residual, std::abs(mu.dot(u)))));
  return {u, ValueKind::relative, 1.0};
}

double average_reward_scalar(const Eigen::VectorXd& r, const Eigen::VectorXd& mu) {
  if (r.size() != mu.size())
    throw std::invalid_argument("average_reward_scalar: size mismatch");
  return mu.dot(r);
}

AdvantageMatrix::AdvantageMatrix(Eigen::MatrixXd a,
                                 Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support,
                                 double gamma)
    : a_(std::move(a)), support_(std::move(support)), gamma_(gamma) {
  if (a_.rows() != a_.cols() || a_.rows() != support_.rows() || a_.cols() != support_.cols())
    throw std::invalid_argument("AdvantageMatrix: matrix and support shapes disagree");
}

bool AdvantageMatrix::on_support(Eigen::Index s, Eigen::Index next) const {
  if (s < 0 || s >= size() || next < 0 || next >= size())
    throw std::out_of_range("AdvantageMatrix: state pair (" + std::to_string(s) + ", " +
                            std::to_string(next) + ") out of range");
  return support_(s, next);
}

double AdvantageMatrix::at(Eigen::Index s, Eigen::Index next) const {
  if (!on_support(s, next))
    throw std::out_of_range("AdvantageMatrix: pair (" + std::to_string(s) + ", " +
                            std::to_string(next) + ") carries no transition mass");
  return a_(s, next);
}

AdvantageMatrix state_advantage(const Chain& chain, const ValueVector& value,
                                const Eigen::MatrixXd& edge_reward) {
  const Eigen::Index n = chain.size();
  if (value.values.size() != n)
    throw std::invalid_argument("state_advantage: value vector has size " +
                                std::to_string(value.values.size()) + ", chain has " +
                                std::to_string(n) + " states");
  if (edge_reward.rows() != n || edge_reward.cols() != n)
    throw std::invalid_argument("state_advantage: edge_reward must be " + std::to_string(n) +
                                "x" + std::to_string(n));

  const double gamma = value.kind == ValueKind::relative ? 1.0 : value.gamma;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support(n, n);
  support.setConstant(false);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      if (chain.p()(s, t) > 0.0) {
        support(s, t) = true;
        a(s, t) = edge_reward(s, t) + gamma * value.values[t] - value.values[s];
      }
  return AdvantageMatrix(std::move(a), std::move(support), gamma);
}

AdvantageIdentity advantage_error_identity(const Chain& chain, const ValueVector& value_true,
                                           const ValueVector& value_approx,
                                           const Eigen::MatrixXd& edge_reward) {
  if (value_true.kind != value_approx.kind)
    throw std::invalid_argument("advantage_error_identity: value kinds disagree");
  if (value_true.kind == ValueKind::discounted && value_true.gamma != value_approx.gamma)
    throw std::invalid_argument("advantage_error_identity: discount factors disagree");

  const AdvantageMatrix a = state_advantage(chain, value_true, edge_reward);
  const AdvantageMatrix a_hat = state_advantage(chain, value_approx, edge_reward);
  const Eigen::VectorXd mu = stationary_distribution(chain);
  const Eigen::Index n = chain.size();

  AdvantageIdentity out;
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      if (chain.p()(s, t) > 0.0) {
        const double d = a.raw()(s, t) - a_hat.raw()(s, t);
        out.lhs += mu[s] * chain.p()(s, t) * d * d;
      }

  const Eigen::VectorXd g = value_true.values - value_approx.values;
  const double gamma = a.gamma();
  out.dir_norm_sq = dirichlet_norm_sq(g, chain);
  if (value_true.kind == ValueKind::relative) {
    out.rhs = 2.0 * out.dir_norm_sq;
  } else {
    out.mu_norm_sq = tdlab::mu_norm_sq(g, mu);
    out.rhs = 2.0 * gamma * out.dir_norm_sq + (1.0 - gamma) * (1.0 - gamma) * out.mu_norm_sq;
  }
  return out;
}

}
