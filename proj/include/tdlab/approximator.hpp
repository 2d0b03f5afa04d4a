#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace tdlab {

// A parametric value function on a fixed finite state space. Parameters are
// passed explicitly, so one family object serves any number of theta vectors.
class Approximator {
public:
  virtual ~Approximator() = default;

  virtual std::string family() const = 0;
  virtual Eigen::Index state_count() const = 0;
  virtual Eigen::Index param_count() const = 0;
  virtual Eigen::VectorXd initial_theta() const = 0;
  virtual double value(const Eigen::VectorXd& theta, Eigen::Index s) const = 0;
  virtual Eigen::VectorXd grad(const Eigen::VectorXd& theta, Eigen::Index s) const = 0;

  // All state values in one vector.
  Eigen::VectorXd values(const Eigen::VectorXd& theta) const;

  // Feature matrix when value(theta, .) = features() * theta; null otherwise.
  virtual const Eigen::MatrixXd* features() const { return nullptr; }

protected:
  void check_state(Eigen::Index s) const;
  void check_theta(const Eigen::VectorXd& theta) const;
};

// One adjustable value per state.
std::unique_ptr<Approximator> make_tabular(Eigen::Index n_states);

// value(theta, s) = features.row(s) . theta; initial theta is zero.
std::unique_ptr<Approximator> make_linear(Eigen::MatrixXd features);

// value(theta, s) = w . tanh(W x_s + b) + c on per-state embeddings x_s (rows
// of embedding). theta concatenates W row by row, then b, then w, then c.
// Initial theta is uniform on [-0.5, 0.5], drawn from init_seed.
std::unique_ptr<Approximator> make_two_layer(Eigen::MatrixXd embedding, Eigen::Index width,
                                             std::uint64_t init_seed);

// Same network on one-hot state embeddings.
std::unique_ptr<Approximator> make_two_layer(Eigen::Index n_states, Eigen::Index width,
                                             std::uint64_t init_seed);

// Largest relative gap between grad() and central differences at one state:
// max_i |grad_i - fd_i| / (1 + |grad_i|), with per-coordinate step
// h * (1 + |theta_i|).
double grad_check(const Approximator& approx, const Eigen::VectorXd& theta, Eigen::Index s,
                  double h = 1e-5);

}
