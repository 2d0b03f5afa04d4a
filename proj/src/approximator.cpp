#include "tdlab/approximator.hpp"

#include <cmath>
#include <stdexcept>

#include "tdlab/rng.hpp"

namespace tdlab {

Eigen::VectorXd Approximator::values(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out(state_count());
  for (Eigen::Index s = 0; s < state_count(); ++s)
    out[s] = value(theta, s);
  return out;
}

void Approximator::check_state(Eigen::Index s) const {
  if (s < 0 || s >= state_count())
    throw std::invalid_argument(family() + ": state " + std::to_string(s) + " out of range [0, " +
                                std::to_string(state_count()) + ")");
}

void Approximator::check_theta(const Eigen::VectorXd& theta) const {
  if (theta.size() != param_count())
    throw std::invalid_argument(family() + ": theta has size " + std::to_string(theta.size()) +
                                ", expected " + std::to_string(param_count()));
}

namespace {

class Tabular final : public Approximator {
public:
  explicit Tabular(Eigen::Index n) : id_(Eigen::MatrixXd::Identity(n, n)) {
    if (n < 1)
      throw std::invalid_argument("make_tabular: need at least one state");
  }

  std::string family() const override { return "tabular"; }
  Eigen::Index state_count() const override { return id_.rows(); }
  Eigen::Index param_count() const override { return id_.rows(); }
  Eigen::VectorXd initial_theta() const override { return Eigen::VectorXd::Zero(id_.rows()); }

  double value(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    return theta[s];
  }

  Eigen::VectorXd grad(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    return id_.row(s).transpose();
  }

  const Eigen::MatrixXd* features() const override { return &id_; }

private:
  Eigen::MatrixXd id_;
};

class Linear final : public Approximator {
public:
  explicit Linear(Eigen::MatrixXd features) : phi_(std::move(features)) {
    if (phi_.rows() < 1 || phi_.cols() < 1)
      throw std::invalid_argument("make_linear: feature matrix must be nonempty");
  }

  std::string family() const override { return "linear"; }
  Eigen::Index state_count() const override { return phi_.rows(); }
  Eigen::Index param_count() const override { return phi_.cols(); }
  Eigen::VectorXd initial_theta() const override { return Eigen::VectorXd::Zero(phi_.cols()); }

  double value(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    return phi_.row(s).dot(theta);
  }

  Eigen::VectorXd grad(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    return phi_.row(s).transpose();
  }

  const Eigen::MatrixXd* features() const override { return &phi_; }

private:
  Eigen::MatrixXd phi_;
};

// v(s) = w . tanh(W x_s + b) + c with theta = (rows of W, b, w, c).
class TwoLayer final : public Approximator {
public:
  TwoLayer(Eigen::MatrixXd embedding, Eigen::Index width, std::uint64_t init_seed)
      : x_(std::move(embedding)), width_(width), seed_(init_seed) {
    if (x_.rows() < 1 || x_.cols() < 1)
      throw std::invalid_argument("make_two_layer: embedding matrix must be nonempty");
    if (width_ < 1)
      throw std::invalid_argument("make_two_layer: width must be at least 1");
  }

  std::string family() const override { return "two_layer"; }
  Eigen::Index state_count() const override { return x_.rows(); }
  Eigen::Index param_count() const override { return width_ * (x_.cols() + 2) + 1; }

  Eigen::VectorXd initial_theta() const override {
    Rng rng(seed_);
    Eigen::VectorXd theta(param_count());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      theta[i] = rng.uniform(-0.5, 0.5);
    return theta;
  }

  double value(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    return out_weights(theta).dot(hidden(theta, s)) + theta[theta.size() - 1];
  }

  Eigen::VectorXd grad(const Eigen::VectorXd& theta, Eigen::Index s) const override {
    check_theta(theta);
    check_state(s);
    const Eigen::Index embed = x_.cols();
    const Eigen::VectorXd h = hidden(theta, s);
    const Eigen::VectorXd w = out_weights(theta);
    // tanh' = 1 - tanh^2, reusing the hidden activations.
    const Eigen::VectorXd back = w.array() * (1.0 - h.array().square());

    Eigen::VectorXd g(theta.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(
        g.data(), width_, embed);
    gw = back * x_.row(s);
    g.segment(width_ * embed, width_) = back;
    g.segment(width_ * (embed + 1), width_) = h;
    g[g.size() - 1] = 1.0;
    return g;
  }

private:
  Eigen::VectorXd hidden(const Eigen::VectorXd& theta, Eigen::Index s) const {
    const Eigen::Index embed = x_.cols();
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w1(
        theta.data(), width_, embed);
    const Eigen::VectorXd b = theta.segment(width_ * embed, width_);
    return (w1 * x_.row(s).transpose() + b).array().tanh();
  }

  Eigen::VectorXd out_weights(const Eigen::VectorXd& theta) const {
    return theta.segment(width_ * (x_.cols() + 1), width_);
  }

  Eigen::MatrixXd x_;
  Eigen::Index width_;
  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<Approximator> make_tabular(Eigen::Index n_states) {
  return std::make_unique<Tabular>(n_states);
}

std::unique_ptr<Approximator> make_linear(Eigen::MatrixXd features) {
  return std::make_unique<Linear>(std::move(features));
}

std::unique_ptr<Approximator> make_two_layer(Eigen::MatrixXd embedding, Eigen::Index width,
                                             std::uint64_t init_seed) {
  return std::make_unique<TwoLayer>(std::move(embedding), width, init_seed);
}

std::unique_ptr<Approximator> make_two_layer(Eigen::Index n_states, Eigen::Index width,
                                             std::uint64_t init_seed) {
  if (n_states < 1)
    throw std::invalid_argument("make_two_layer: need at least one state");
  return std::make_unique<TwoLayer>(Eigen::MatrixXd::Identity(n_states, n_states), width,
                                    init_seed);
}

double grad_check(const Approximator& approx, const Eigen::VectorXd& theta, Eigen::Index s,
                  double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("grad_check: step must be positive");
  const Eigen::VectorXd g = approx.grad(theta, s);
  double worst = 0.0;
  Eigen::VectorXd probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double step = h * (1.0 + std::abs(theta[i]));
    probe[i] = theta[i] + step;
    const double up = approx.value(probe, s);
    probe[i] = theta[i] - step;
    const double down = approx.value(probe, s);
    probe[i] = theta[i];
    const double fd = (up - down) / (2.0 * step);
    worst = std::max(worst, std::abs(g[i] - fd) / (1.0 + std::abs(g[i])));
  }
  return worst;
}

}
