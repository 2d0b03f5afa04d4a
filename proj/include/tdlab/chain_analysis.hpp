#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"

namespace tdlab {

// Inner product sum_s mu(s) f(s) g(s). Accepts any dense vector expressions.
template <typename F, typename G, typename M>
double mu_inner(const Eigen::MatrixBase<F>& f, const Eigen::MatrixBase<G>& g,
                const Eigen::MatrixBase<M>& mu) {
  if (f.size() != g.size() || f.size() != mu.size())
    throw std::invalid_argument("mu_inner: size mismatch");
  return (mu.derived().array() * f.derived().array() * g.derived().array()).sum();
}

template <typename F, typename M>
double mu_norm_sq(const Eigen::MatrixBase<F>& f, const Eigen::MatrixBase<M>& mu) {
  return mu_inner(f, f, mu);
}

// Components of the support digraph (edge s -> t iff p(s,t) > 0), each sorted,
// listed in order of their smallest state.
std::vector<std::vector<Eigen::Index>> strongly_connected_components(const Eigen::MatrixXd& p);

// Stationary distribution of an irreducible chain. Returns the cached vector
// when the chain carries one; otherwise solves mu^T p = mu^T, sum mu = 1 by
// least squares, falling back to power iteration on (p + I)/2 if the direct
// solve leaves a residual. Throws std::invalid_argument on reducible chains,
// naming the strongly connected components.
Eigen::VectorXd stationary_distribution(const Chain& chain);

// Detailed-balance test against the chain's stationary distribution.
ReversibilityCertificate check_reversibility(const Chain& chain, double tol = 1e-10);

// 1/2 sum_{s,s'} mu(s) p(s,s') (f(s') - f(s))^2.
double dirichlet_norm_sq(const Eigen::VectorXd& f, const Chain& chain);

// Same quantity through the operator form <(I - p) f, f>_mu.
double dirichlet_via_operator(const Eigen::VectorXd& f, const Chain& chain);

struct SpectralReport {
  double beta = 0.0;        // 1 - lambda2
  double lambda2 = 0.0;     // largest eigenvalue below the leading 1
  double lambda_min = 0.0;
  bool psd = false;         // lambda_min >= -1e-10
};

// Eigenvalue summary of a reversible chain, computed on the symmetrization
// diag(mu)^{1/2} p diag(mu)^{-1/2}. Throws std::invalid_argument when the
// chain fails its reversibility check or when eigenvalue 1 is not simple.
// A single-state chain reports beta = 2 by convention (lambda2 = -1).
SpectralReport spectral_gap(const Chain& chain);

// Lazy nearest-neighbour walk on a cubic lattice: from each node, each of the
// 2*dim moves carries mass 1/(2*dim), and moves that would leave the lattice
// stay in place. The matrix is dense, so keep extent^dim modest.
struct GridSpec {
  int dim = 1;              // 1, 2 or 3
  double eps = 0.0;         // lattice spacing, > 0
  Eigen::Index extent = 0;  // nodes per axis, >= 3
};

Eigen::Index grid_node_count(const GridSpec& spec);
std::array<Eigen::Index, 3> grid_coords(const GridSpec& spec, Eigen::Index node);
Eigen::Index grid_index(const GridSpec& spec, const std::array<Eigen::Index, 3>& coords);
// Physical coordinate of a node along one axis, coords[axis] * eps.
double grid_position(const GridSpec& spec, Eigen::Index node, int axis);

Chain grid_walk_chain(const GridSpec& spec);

struct GridTaylorResult {
  double dir_norm = 0.0;            // Dirichlet seminorm of f on the walk
  double continuum_estimate = 0.0;  // eps^2/(2 dim) * mean squared gradient
  double ratio = 1.0;               // dir_norm / continuum_estimate, 1 when both vanish
};

// Compares the walk's Dirichlet seminorm with its small-eps continuum limit,
// estimating the gradient by centered differences under the same stationary
// weights. Requires |f| <= 1e-12 on the two outermost layers of every axis so
// the boundary reflection cannot contaminate the comparison.
GridTaylorResult grid_taylor_check(const Eigen::VectorXd& f, const GridSpec& spec);

}
