#pragma once

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"
#include "tdlab/rng.hpp"

namespace tdlab {

// Row-stochastic matrix with strictly positive entries; each row is a flat
// Dirichlet draw, so the chain is irreducible and aperiodic.
Eigen::MatrixXd random_stochastic_matrix(Eigen::Index n, Rng& rng);

Chain random_dense_chain(Eigen::Index n, Rng& rng);

// Metropolis chain on a random connected graph with log-uniform target
// weights in [0.1, 10]; size drawn uniformly from [min_n, max_n].
Chain random_reversible_chain(Eigen::Index min_n, Eigen::Index max_n, Rng& rng);

Eigen::VectorXd random_target_weights(Eigen::Index n, Rng& rng);

// Dense random mdp: every state gets 1 to max_actions actions, Dirichlet
// kernels over all states, rewards uniform in [-1, 1] on every transition.
Mdp random_mdp(Eigen::Index n_states, Eigen::Index max_actions, Rng& rng);

// Independent normals with the given standard deviation.
Eigen::VectorXd random_vector(Eigen::Index n, double scale, Rng& rng);
Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng);

}
