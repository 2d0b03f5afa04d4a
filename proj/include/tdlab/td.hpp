#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdlab/approximator.hpp"
#include "tdlab/mdp.hpp"
#include "tdlab/value.hpp"

namespace tdlab {

// Step size schedule: a constant, or alpha0 / (1 + t / tau).
struct LearningRate {
  enum class Kind { constant, decaying };

  Kind kind = Kind::constant;
  double alpha0 = 0.0;
  double tau = 0.0;

  double at(std::int64_t t) const;
  // Accepts "0.05" or "decay:ALPHA0:TAU".
  static LearningRate parse(const std::string& text);
  std::string describe() const;
};

enum class Centering { none, known, running };

const char* to_string(Centering c);
Centering centering_from_string(const std::string& text);

struct TdConfig {
  double gamma = 0.0;
  std::int64_t steps = 0;
  LearningRate lr;
  std::uint64_t seed = 0;
  Centering centering = Centering::none;  // required away from none at gamma = 1
  std::int64_t log_interval = 1000;
};

struct TdRecord {
  std::int64_t step = 0;
  double mixed_norm = 0.0;  // gamma Dir + (1 - gamma) mu parts combined
  double dir_norm_sq = 0.0;
  double mu_norm_sq = 0.0;
  double expected_step_norm = 0.0;
};

struct TdReport {
  TdConfig config;
  std::string family;
  std::vector<TdRecord> records;
  Eigen::VectorXd final_theta;
};

// One temporal-difference update direction (without the step size):
// (r + gamma v(next) - v(s)) grad v(s).
Eigen::VectorXd td_step(const Approximator& approx, const Eigen::VectorXd& theta, Eigen::Index s,
                        Eigen::Index next, double reward, double gamma);

// Average-reward variant: the reward is centered and values are undiscounted.
Eigen::VectorXd centered_td_step(const Approximator& approx, const Eigen::VectorXd& theta,
                                 Eigen::Index s, Eigen::Index next, double reward,
                                 double reward_average);

// Stationary expectation of the update direction. At gamma = 1 the reward is
// centered by its stationary mean.
Eigen::VectorXd expected_td_step(const Approximator& approx, const Eigen::VectorXd& theta,
                                 const Chain& chain, const Eigen::VectorXd& r, double gamma);

struct MixedNorm {
  double mixed = 0.0;
  double dir_part = 0.0;
  double mu_part = 0.0;
};

// gamma Dir(v_theta - v) + (1 - gamma) |v_theta - v|_mu^2; pure Dirichlet at
// gamma = 1. value_true holds the comparison values (exact or relative).
MixedNorm mixed_norm_sq(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& value_true, double gamma);

enum class GradientMode { analytic_linear, finite_difference };

// Exact minimizer of the mixed norm for families with a feature matrix.
// Flat directions (the constant shift at gamma = 1, say) resolve to the
// minimum-norm solution.
Eigen::VectorXd mixed_norm_minimizer(const Approximator& approx, const Chain& chain,
                                     const Eigen::VectorXd& value_true, double gamma);

// Gradient of the mixed norm in theta. The analytic route needs a family with
// a feature matrix; finite differences work for any family.
Eigen::VectorXd mixed_norm_gradient(const Approximator& approx, const Eigen::VectorXd& theta,
                                    const Chain& chain, const Eigen::VectorXd& value_true,
                                    double gamma, GradientMode mode);

struct TheoremGap {
  Eigen::VectorXd expected_step;
  Eigen::VectorXd neg_half_grad;
  double gap_inf_norm = 0.0;
};

// Distance between the expected update and -1/2 of the mixed-norm gradient.
// Vanishes on reversible chains; the discounted form takes gamma < 1.
TheoremGap theorem1_gap(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& r, double gamma);

// Average-reward form at gamma = 1, against the relative-value Dirichlet norm.
TheoremGap theorem2_gap(const Approximator& approx, const Eigen::VectorXd& theta,
                        const Chain& chain, const Eigen::VectorXd& r);

// The term separating the expected update from the gradient flow on chains
// without detailed balance:
// 2 sum_{s,s'} mu(s) p(s,s') (f(s') - f(s)) grad v(s'), f = v_theta - value_true.
Eigen::VectorXd nonreversible_correction(const Approximator& approx, const Eigen::VectorXd& theta,
                                         const Chain& chain, const Eigen::VectorXd& value_true);

// Simulates one trajectory from a stationary start and applies the schedule.
// Records the error norms every log_interval steps and at the end. At
// gamma = 1, centering picks the stationary mean reward (known) or an online
// average updated at rate min(1, 10 alpha_t) (running).
TdReport run_td(const Mdp& mdp, const PolicyTable& policy, const Approximator& approx,
                const TdConfig& config);

}
