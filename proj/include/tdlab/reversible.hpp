#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tdlab/mdp.hpp"
#include "tdlab/rng.hpp"

namespace tdlab {

// Undirected connected graph on {0, ..., n-1}. Duplicate edges collapse,
// self-loops are allowed and count once in the degree.
class Graph {
public:
  Graph(Eigen::Index n, std::vector<std::pair<Eigen::Index, Eigen::Index>> edges);

  Eigen::Index size() const { return static_cast<Eigen::Index>(adjacency_.size()); }
  const std::vector<Eigen::Index>& neighbors(Eigen::Index s) const;  // sorted
  Eigen::Index degree(Eigen::Index s) const;
  // Canonical edge list: (min, max) pairs, sorted, deduplicated.
  const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges() const { return edges_; }

private:
  std::vector<std::vector<Eigen::Index>> adjacency_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges_;
};

Graph path_graph(Eigen::Index n);
Graph cycle_graph(Eigen::Index n);
Graph complete_graph(Eigen::Index n);

// Uniform random labeled tree plus extra uniform edges (as many as fit).
Graph random_connected_graph(Eigen::Index n, Eigen::Index extra_edges, Rng& rng);

// p(s, s') = 1/deg(s) on edges; stationary law proportional to the degrees.
Chain simple_random_walk(const Graph& graph);

// Metropolis adjustment of the walk on graph: off the diagonal
// p(s, s') = min(1/deg(s), f(s') / (f(s) deg(s'))) on edges, the remainder
// stays put. Stationary law f / sum(f), attached along with its certificate.
Chain metropolis_chain(const Graph& graph, const Eigen::VectorXd& f);

// General form over a proposal chain with symmetric support:
// p(s, s') = min(p0(s, s'), f(s') p0(s', s) / f(s)) off the diagonal.
Chain metropolis_from_proposal(const Chain& p0, const Eigen::VectorXd& f);

// exp(beta (v - max v)), safe against overflow for any beta sign and scale.
Eigen::VectorXd gibbs_target(const Eigen::VectorXd& v, double beta);

// A chain rewritten as an mdp: one action per supported next state, with
// point-mass kernels, and the policy that reproduces the chain exactly.
struct NavigationMdp {
  Mdp mdp;
  PolicyTable policy;
};

NavigationMdp navigation_mdp_from_chain(const Chain& chain, const Eigen::MatrixXd& edge_reward);

}
