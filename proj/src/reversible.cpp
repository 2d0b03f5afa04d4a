#include "tdlab/reversible.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "tdlab/chain_analysis.hpp"

namespace tdlab {

Graph::Graph(Eigen::Index n, std::vector<std::pair<Eigen::Index, Eigen::Index>> edges) {
  if (n < 1)
    throw std::invalid_argument("Graph: need at least one vertex");
  std::set<std::pair<Eigen::Index, Eigen::Index>> canonical;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("Graph: edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ") out of range for " + std::to_string(n) +
                                  " vertices");
    canonical.emplace(std::min(u, v), std::max(u, v));
  }
  edges_.assign(canonical.begin(), canonical.end());

  adjacency_.resize(n);
  for (const auto& [u, v] : edges_) {
    adjacency_[u].push_back(v);
    if (v != u)
      adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_)
    std::sort(list.begin(), list.end());

  // Reject disconnected graphs here so every consumer can rely on one piece.
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const Eigen::Index v = queue.back();
    queue.pop_back();
    for (const Eigen::Index w : adjacency_[v])
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
  }
  std::string missing;
  for (Eigen::Index v = 0; v < n; ++v)
    if (!seen[v])
      missing += (missing.empty() ? "" : ", ") + std::to_string(v);
  if (!missing.empty())
    throw std::invalid_argument("Graph: not connected; vertices unreachable from 0: {" +
                                missing + "}");
}

const std::vector<Eigen::Index>& Graph::neighbors(Eigen::Index s) const {
  if (s < 0 || s >= size())
    throw std::invalid_argument("Graph::neighbors: vertex " + std::to_string(s) +
                                " out of range");
  return adjacency_[s];
}

Eigen::Index Graph::degree(Eigen::Index s) const {
  return static_cast<Eigen::Index>(neighbors(s).size());
}

Graph path_graph(Eigen::Index n) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  for (Eigen::Index v = 0; v + 1 < n; ++v)
    edges.emplace_back(v, v + 1);
  return Graph(n, std::move(edges));
}

Graph cycle_graph(Eigen::Index n) {
  if (n < 3)
    throw std::invalid_argument("cycle_graph: need at least 3 vertices");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  for (Eigen::Index v = 0; v < n; ++v)
    edges.emplace_back(v, (v + 1) % n);
  return Graph(n, std::move(edges));
}

Graph complete_graph(Eigen::Index n) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = u + 1; v < n; ++v)
      edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

Graph random_connected_graph(Eigen::Index n, Eigen::Index extra_edges, Rng& rng) {
  if (n < 1)
    throw std::invalid_argument("random_connected_graph: need at least one vertex");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  if (n == 2) {
    edges.emplace_back(0, 1);
  } else if (n >= 3) {
    // Uniform labeled tree via a random Pruefer sequence.
    std::vector<Eigen::Index> seq(n - 2);
    for (auto& v : seq)
      v = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    std::vector<Eigen::Index> degree(n, 1);
    for (const Eigen::Index v : seq)
      ++degree[v];
    std::set<Eigen::Index> leaves;
    for (Eigen::Index v = 0; v < n; ++v)
      if (degree[v] == 1)
        leaves.insert(v);
    for (const Eigen::Index v : seq) {
      const Eigen::Index leaf = *leaves.begin();
      leaves.erase(leaves.begin());
      edges.emplace_back(leaf, v);
      if (--degree[v] == 1)
        leaves.insert(v);
    }
    const Eigen::Index a = *leaves.begin();
    const Eigen::Index b = *std::next(leaves.begin());
    edges.emplace_back(a, b);
  }

  std::set<std::pair<Eigen::Index, Eigen::Index>> present;
  for (auto [u, v] : edges)
    present.emplace(std::min(u, v), std::max(u, v));
  Eigen::Index added = 0;
  for (Eigen::Index attempt = 0; added < extra_edges && attempt < 20 * extra_edges + 100;
       ++attempt) {
    const auto u = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const auto v = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    if (u == v)
      continue;
    const auto edge = std::make_pair(std::min(u, v), std::max(u, v));
    if (present.insert(edge).second) {
      edges.push_back(edge);
      ++added;
    }
  }
  return Graph(n, std::move(edges));
}

Chain simple_random_walk(const Graph& graph) {
  const Eigen::Index n = graph.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  double total_degree = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (graph.degree(s) == 0)
      throw std::invalid_argument("simple_random_walk: vertex " + std::to_string(s) +
                                  " has no edges");
    total_degree += static_cast<double>(graph.degree(s));
  }
  Eigen::VectorXd mu(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const double step = 1.0 / static_cast<double>(graph.degree(s));
    for (const Eigen::Index t : graph.neighbors(s))
      p(s, t) = step;
    mu[s] = static_cast<double>(graph.degree(s)) / total_degree;
  }
  Chain chain(p, mu);
  return Chain(std::move(p), std::move(mu), check_reversibility(chain));
}

namespace {

void check_target(const Eigen::VectorXd& f, Eigen::Index n, const char* who) {
  if (f.size() != n)
    throw std::invalid_argument(std::string(who) + ": target has size " +
                                std::to_string(f.size()) + ", expected " + std::to_string(n));
  for (Eigen::Index s = 0; s < n; ++s)
    if (!(f[s] > 0.0))
      throw std::invalid_argument(std::string(who) + ": target weights must be positive, f(" +
                                  std::to_string(s) + ") = " + std::to_string(f[s]));
}

Chain finish_metropolis(Eigen::MatrixXd p, const Eigen::VectorXd& f) {
  const Eigen::Index n = p.rows();
  for (Eigen::Index s = 0; s < n; ++s) {
    double off = 0.0;
    for (Eigen::Index t = 0; t < n; ++t)
      if (t != s)
        off += p(s, t);
    // Acceptance leftovers wait in place. The true off-diagonal mass never
    // exceeds 1, but its rounded sum can by an ulp or two, so clamp.
    p(s, s) = std::max(0.0, 1.0 - off);
  }
  Eigen::VectorXd mu = f / f.sum();
  Chain plain(p, mu);
  ReversibilityCertificate cert = check_reversibility(plain);
  return Chain(std::move(p), std::move(mu), std::move(cert));
}

}  // namespace

Chain metropolis_chain(const Graph& graph, const Eigen::VectorXd& f) {
  const Eigen::Index n = graph.size();
  check_target(f, n, "metropolis_chain");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const double out = 1.0 / static_cast<double>(graph.degree(s));
    for (const Eigen::Index t : graph.neighbors(s)) {
      if (t == s)
        continue;
      p(s, t) = std::min(out, f[t] / (f[s] * static_cast<double>(graph.degree(t))));
    }
  }
  return finish_metropolis(std::move(p), f);
}

Chain metropolis_from_proposal(const Chain& p0, const Eigen::VectorXd& f) {
  const Eigen::Index n = p0.size();
  check_target(f, n, "metropolis_from_proposal");
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = s + 1; t < n; ++t)
      if ((p0.p()(s, t) > 0.0) != (p0.p()(t, s) > 0.0))
        throw std::invalid_argument(
            "metropolis_from_proposal: proposal support is not symmetric at (" +
            std::to_string(s) + ", " + std::to_string(t) + ")");

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t) {
      if (t == s || p0.p()(s, t) == 0.0)
        continue;
      p(s, t) = std::min(p0.p()(s, t), f[t] * p0.p()(t, s) / f[s]);
    }
  return finish_metropolis(std::move(p), f);
}

Eigen::VectorXd gibbs_target(const Eigen::VectorXd& v, double beta) {
  if (v.size() < 1)
    throw std::invalid_argument("gibbs_target: empty value vector");
  const Eigen::ArrayXd scaled = beta * v.array();
  return (scaled - scaled.maxCoeff()).exp().matrix();
}

NavigationMdp navigation_mdp_from_chain(const Chain& chain, const Eigen::MatrixXd& edge_reward) {
  const Eigen::Index n = chain.size();
  if (edge_reward.rows() != n || edge_reward.cols() != n)
    throw std::invalid_argument("navigation_mdp_from_chain: edge_reward must be " +
                                std::to_string(n) + "x" + std::to_string(n));

  NavigationMdp out;
  out.mdp.n_states = n;
  out.mdp.actions.resize(n);
  out.policy.probs.resize(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    std::vector<double> mass;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (chain.p()(s, t) <= 0.0)
        continue;
      ActionModel action;
      action.name = "to_" + std::to_string(t);
      action.kernel = {{t, 1.0}};
      action.rewards = {{t, edge_reward(s, t)}};
      out.mdp.actions[s].push_back(std::move(action));
      mass.push_back(chain.p()(s, t));
    }
    out.policy.probs[s] =
        Eigen::Map<const Eigen::VectorXd>(mass.data(), static_cast<Eigen::Index>(mass.size()));
  }
  return out;
}

}
