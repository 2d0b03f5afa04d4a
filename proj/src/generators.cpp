#include "tdlab/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "tdlab/reversible.hpp"

namespace tdlab {

Eigen::MatrixXd random_stochastic_matrix(Eigen::Index n, Rng& rng) {
  if (n < 1)
    throw std::invalid_argument("random_stochastic_matrix: need at least one state");
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    // Exponential draws renormalize to a flat Dirichlet row.
    double sum = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      p(s, t) = -std::log(1.0 - rng.uniform());
      sum += p(s, t);
    }
    p.row(s) /= sum;
  }
  return p;
}

Chain random_dense_chain(Eigen::Index n, Rng& rng) {
  return Chain(random_stochastic_matrix(n, rng));
}

Eigen::VectorXd random_target_weights(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd f(n);
  const double lo = std::log(0.1), hi = std::log(10.0);
  for (Eigen::Index s = 0; s < n; ++s)
    f[s] = std::exp(rng.uniform(lo, hi));
  return f;
}

Chain random_reversible_chain(Eigen::Index min_n, Eigen::Index max_n, Rng& rng) {
  if (min_n < 2 || max_n < min_n)
    throw std::invalid_argument("random_reversible_chain: need 2 <= min_n <= max_n");
  const Eigen::Index n =
      min_n + static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(max_n - min_n + 1)));
  const Eigen::Index extra = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
  const Graph graph = random_connected_graph(n, extra, rng);
  return metropolis_chain(graph, random_target_weights(n, rng));
}

Mdp random_mdp(Eigen::Index n_states, Eigen::Index max_actions, Rng& rng) {
  if (n_states < 1 || max_actions < 1)
    throw std::invalid_argument("random_mdp: need at least one state and one action");
  Mdp mdp;
  mdp.n_states = n_states;
  mdp.actions.resize(n_states);
  for (Eigen::Index s = 0; s < n_states; ++s) {
    const Eigen::Index count =
        1 + static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(max_actions)));
    for (Eigen::Index a = 0; a < count; ++a) {
      ActionModel action;
      action.name = "a" + std::to_string(a);
      double sum = 0.0;
      std::vector<double> mass(n_states);
      for (Eigen::Index t = 0; t < n_states; ++t) {
        mass[t] = -std::log(1.0 - rng.uniform());
        sum += mass[t];
      }
      for (Eigen::Index t = 0; t < n_states; ++t) {
        action.kernel.emplace_back(t, mass[t] / sum);
        action.rewards.emplace_back(t, rng.uniform(-1.0, 1.0));
      }
      mdp.actions[s].push_back(std::move(action));
    }
  }
  return mdp;
}

Eigen::VectorXd random_vector(Eigen::Index n, double scale, Rng& rng) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = scale * rng.normal();
  return out;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      out(i, j) = scale * rng.normal();
  return out;
}

}
