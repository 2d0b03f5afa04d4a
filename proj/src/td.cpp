#include "tdlab/td.hpp"

#include <cmath>
#include <stdexcept>

#include "tdlab/chain_analysis.hpp"

namespace tdlab {

double LearningRate::at(std::int64_t t) const {
  if (t < 0)
    throw std::invalid_argument("LearningRate::at: negative step index");
  if (kind == Kind::constant)
    return alpha0;
  return alpha0 / (1.0 + static_cast<double>(t) / tau);
}

LearningRate LearningRate::parse(const std::string& text) {
  auto positive = [&text](const std::string& part, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("LearningRate: cannot read " + std::string(what) + " in '" +
                                  text + "'");
    }
    if (used != part.size() || !(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("LearningRate: " + std::string(what) + " must be positive in '" +
                                  text + "'");
    return value;
  };

  LearningRate lr;
  const std::string prefix = "decay:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("LearningRate: expected decay:ALPHA0:TAU, got '" + text + "'");
    lr.kind = Kind::decaying;
    lr.alpha0 = positive(rest.substr(0, colon), "alpha0");
    lr.tau = positive(rest.substr(colon + 1), "tau");
  } else {
    lr.kind = Kind::constant;
    lr.alpha0 = positive(text, "step size");
  }
  return lr;
}

std::string LearningRate::describe() const {
  if (kind == Kind::constant)
    return std::to_string(alpha0);
  return "decay:" + std::to_string(alpha0) + ":" + std::to_string(tau);
}

const char* to_string(Centering c) {
  switch (c) {
    case Centering::none:
      return "none";
    case Centering::known:
      return "known";
    case Centering::running:
      return "running";
  }
  return "none";
}

Centering centering_from_string(const std::string& text) {
  if (text == "none")
    return Centering::none;
  if (text == "known")
    return Centering::known;
  if (text == "running")
    return Centering::running;
  throw std::invalid_argument("centering must be none, known or running, got '" + text + "'");
}

Eigen::VectorXd td_step(const Approximator& approx, const Eigen::VectorXd& theta, Eigen::Index s,
                        Eigen::Index next, double reward, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("td_step: gamma must lie in [0, 1]");
  const double delta =
      reward + gamma * approx.value(theta, next) - approx.value(theta, s);
  return delta * approx.grad(theta, s);
}

Eigen::VectorXd centered_td_step(const Approximator& approx, const Eigen::VectorXd& theta,
                                 Eigen::Index s, Eigen::Index next, double reward,
                                 double reward_average) {
  const double delta =
      reward - reward_average + approx.value(theta, next) - approx.value(theta, s);
  return delta * approx.grad(theta, s);
}

Eigen::VectorXd expected_td_step(const Approximator& approx, const Eigen::VectorXd& theta,
                                 const Chain& chain, const Eigen::VectorXd& r, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("expected_td_step: gamma must lie in [0, 1]");
  if (r.size() != chain.size() || approx.state_count() != chain.size())
    throw std::invalid_argument("expected_td_step: state counts disagree");

  const Eigen::VectorXd mu = stationary_distribution(chain);
  const Eigen::VectorXd v = approx.values(theta);
  Eigen::VectorXd target = r + gamma * (chain.p() * v) - v;
  if (gamma == 1.0)
    target.array() -= mu.dot(r);

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(approx.param_count());
  for (Eigen::Index s = 0; s < chain.size(); ++s)
    acc += mu[s] * target[s] * approx.grad(theta, s);
  return acc;
}

MixedNorm mixed_norm_sq(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& value_true, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("mixed_norm_sq: gamma must lie in [0, 1]");
  if (value_true.size() != chain.size() || approx.state_count() != chain.size())
    throw std::invalid_argument("mixed_norm_sq: state counts disagree");

  const Eigen::VectorXd f = approx.values(theta) - value_true;
  MixedNorm out;
  out.dir_part = dirichlet_norm_sq(f, chain);
  out.mu_part = mu_norm_sq(f, stationary_distribution(chain));
  out.mixed = gamma * out.dir_part + (1.0 - gamma) * out.mu_part;
  return out;
}

Eigen::VectorXd mixed_norm_minimizer(const Approximator& approx, const Chain& chain,
                                     const Eigen::VectorXd& value_true, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("mixed_norm_minimizer: gamma must lie in [0, 1]");
  const Eigen::MatrixXd* phi = approx.features();
  if (phi == nullptr)
    throw std::invalid_argument("mixed_norm_minimizer: family '" + approx.family() +
                                "' has no feature matrix");
  if (value_true.size() != chain.size() || phi->rows() != chain.size())
    throw std::invalid_argument("mixed_norm_minimizer: state counts disagree");

  // The mixed norm is quadratic: (phi theta - v)^T g (phi theta - v) with
  // g = gamma sym(diag(mu)(I - p)) + (1 - gamma) diag(mu).
  const Eigen::VectorXd mu = stationary_distribution(chain);
  const Eigen::Index n = chain.size();
  const Eigen::MatrixXd k =
      mu.asDiagonal() * (Eigen::MatrixXd::Identity(n, n) - chain.p());
  const Eigen::MatrixXd g = gamma * 0.5 * (k + k.transpose()) +
                            (1.0 - gamma) * Eigen::MatrixXd(mu.asDiagonal());
  const Eigen::MatrixXd normal = phi->transpose() * g * (*phi);
  const Eigen::VectorXd rhs = phi->transpose() * g * value_true;
  return normal.completeOrthogonalDecomposition().solve(rhs);
}

Eigen::VectorXd mixed_norm_gradient(const Approximator& approx, const Eigen::VectorXd& theta,
                                    const Chain& chain, const Eigen::VectorXd& value_true,
                                    double gamma, GradientMode mode) {
  if (mode == GradientMode::analytic_linear) {
    const Eigen::MatrixXd* phi = approx.features();
    if (phi == nullptr)
      throw std::invalid_argument(
          "mixed_norm_gradient: family '" + approx.family() +
          "' has no feature matrix; use the finite-difference mode");
    const Eigen::VectorXd mu = stationary_distribution(chain);
    const Eigen::VectorXd f = (*phi) * theta - value_true;
    const Eigen::Index n = chain.size();
    // Dir(f) = f^T K f with K = diag(mu)(I - p), so its gradient in f is
    // (K + K^T) f; the mu part contributes 2 diag(mu) f.
    const Eigen::MatrixXd k =
        mu.asDiagonal() * (Eigen::MatrixXd::Identity(n, n) - chain.p());
    const Eigen::VectorXd grad_f =
        gamma * ((k + k.transpose()) * f) + 2.0 * (1.0 - gamma) * mu.asDiagonal() * f;
    return phi->transpose() * grad_f;
  }

  Eigen::VectorXd probe = theta;
  Eigen::VectorXd out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double step = 1e-5 * (1.0 + std::abs(theta[i]));
    probe[i] = theta[i] + step;
    const double up = mixed_norm_sq(approx, probe, chain, value_true, gamma).mixed;
    probe[i] = theta[i] - step;
    const double down = mixed_norm_sq(approx, probe, chain, value_true, gamma).mixed;
    probe[i] = theta[i];
    out[i] = (up - down) / (2.0 * step);
  }
  return out;
}

namespace {

TheoremGap gap_between(Eigen::VectorXd expected, Eigen::VectorXd grad) {
  TheoremGap gap;
  gap.expected_step = std::move(expected);
  gap.neg_half_grad = -0.5 * grad;
  gap.gap_inf_norm = (gap.expected_step - gap.neg_half_grad).cwiseAbs().maxCoeff();
  return gap;
}

}  // namespace

TheoremGap theorem1_gap(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& r, double gamma) {
  if (gamma >= 1.0)
    throw std::invalid_argument("theorem1_gap: gamma must be below 1, see theorem2_gap");
  const ValueVector v = value_function(chain, r, gamma);
  return gap_between(
      expected_td_step(approx, theta, chain, r, gamma),
      mixed_norm_gradient(approx, theta, chain, v.values, gamma,
                          GradientMode::finite_difference));
}

TheoremGap theorem2_gap(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& r) {
  const ValueVector u = relative_value(chain, r);
  return gap_between(
      expected_td_step(approx, theta, chain, r, 1.0),
      mixed_norm_gradient(approx, theta, chain, u.values, 1.0,
                          GradientMode::finite_difference));
}

Eigen::VectorXd nonreversible_correction(const Approximator& approx, const Eigen::VectorXd& theta,
                                         const Chain& chain, const Eigen::VectorXd& value_true) {
  if (value_true.size() != chain.size() || approx.state_count() != chain.size())
    throw std::invalid_argument("nonreversible_correction: state counts disagree");
  const Eigen::VectorXd mu = stationary_distribution(chain);
  const Eigen::VectorXd f = approx.values(theta) - value_true;

  Eigen::MatrixXd grads(chain.size(), approx.param_count());
  for (Eigen::Index s = 0; s < chain.size(); ++s)
    grads.row(s) = approx.grad(theta, s).transpose();

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(approx.param_count());
  for (Eigen::Index s = 0; s < chain.size(); ++s)
    for (Eigen::Index t = 0; t < chain.size(); ++t) {
      const double w = mu[s] * chain.p()(s, t);
      if (w > 0.0)
        acc += 2.0 * w * (f[t] - f[s]) * grads.row(t).transpose();
    }
  return acc;
}

TdReport run_td(const Mdp& mdp, const PolicyTable& policy, const Approximator& approx,
                const TdConfig& config) {
  if (config.gamma < 0.0 || config.gamma > 1.0)
    throw std::invalid_argument("run_td: gamma must lie in [0, 1]");
  if (config.gamma == 1.0 && config.centering == Centering::none)
    throw std::invalid_argument(
        "run_td: gamma = 1 needs centering 'known' or 'running' to keep updates bounded");
  if (config.gamma < 1.0 && config.centering != Centering::none)
    throw std::invalid_argument("run_td: centering applies only at gamma = 1");
  if (config.steps < 0)
    throw std::invalid_argument("run_td: steps must be nonnegative");
  if (config.log_interval < 1)
    throw std::invalid_argument("run_td: log_interval must be at least 1");
  if (approx.state_count() != mdp.n_states)
    throw std::invalid_argument("run_td: approximator covers " +
                                std::to_string(approx.state_count()) + " states, mdp has " +
                                std::to_string(mdp.n_states));

  const Chain chain = induced_chain(mdp, policy);
  const Eigen::VectorXd r = expected_reward_vector(mdp, policy);
  const Eigen::VectorXd mu = stationary_distribution(chain);
  const Eigen::VectorXd value_true = config.gamma == 1.0
                                         ? relative_value(chain, r).values
                                         : value_function(chain, r, config.gamma).values;
  const double known_average = mu.dot(r);

  TdReport report;
  report.config = config;
  report.family = approx.family();

  Rng rng(config.seed);
  Eigen::Index s = rng.categorical(mu);
  Eigen::VectorXd theta = approx.initial_theta();
  double running_average = 0.0;

  auto log_record = [&](std::int64_t step) {
    const MixedNorm norm = mixed_norm_sq(approx, theta, chain, value_true, config.gamma);
    TdRecord record;
    record.step = step;
    record.mixed_norm = norm.mixed;
    record.dir_norm_sq = norm.dir_part;
    record.mu_norm_sq = norm.mu_part;
    record.expected_step_norm =
        expected_td_step(approx, theta, chain, r, config.gamma).cwiseAbs().maxCoeff();
    report.records.push_back(record);
  };

  for (std::int64_t t = 0; t < config.steps; ++t) {
    const double alpha = config.lr.at(t);
    const Transition tr = sample_transition(mdp, policy, s, rng);

    Eigen::VectorXd direction;
    if (config.gamma == 1.0) {
      const double average =
          config.centering == Centering::known ? known_average : running_average;
      direction = centered_td_step(approx, theta, s, tr.next, tr.reward, average);
      if (config.centering == Centering::running)
        running_average += std::min(1.0, 10.0 * alpha) * (tr.reward - running_average);
    } else {
      direction = td_step(approx, theta, s, tr.next, tr.reward, config.gamma);
    }
    theta += alpha * direction;
    s = tr.next;

    if ((t + 1) % config.log_interval == 0 || t + 1 == config.steps)
      log_record(t + 1);
  }

  report.final_theta = std::move(theta);
  return report;
}

}
