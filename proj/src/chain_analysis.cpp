#include "tdlab/chain_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tdlab {

namespace {

std::string components_text(const std::vector<std::vector<Eigen::Index>>& comps) {
  std::string out;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    out += c == 0 ? "{" : ", {";
    for (std::size_t i = 0; i < comps[c].size(); ++i) {
      if (i > 0)
        out += ", ";
      out += std::to_string(comps[c][i]);
    }
    out += "}";
  }
  return out;
}

double stationarity_residual(const Eigen::MatrixXd& p, const Eigen::VectorXd& mu) {
  return (p.transpose() * mu - mu).cwiseAbs().maxCoeff();
}

void validate_grid(const GridSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3)
    throw std::invalid_argument("GridSpec: dim must be 1, 2 or 3, got " +
                                std::to_string(spec.dim));
  if (!(spec.eps > 0.0))
    throw std::invalid_argument("GridSpec: eps must be positive");
  if (spec.extent < 3)
    throw std::invalid_argument("GridSpec: extent must be at least 3, got " +
                                std::to_string(spec.extent));
}

}  // namespace

std::vector<std::vector<Eigen::Index>> strongly_connected_components(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  std::vector<std::vector<Eigen::Index>> adj(n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      if (p(s, t) > 0.0)
        adj[s].push_back(t);

  // Tarjan with an explicit frame stack; recursion would overflow on long paths.
  std::vector<Eigen::Index> order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Eigen::Index> stack;
  std::vector<std::vector<Eigen::Index>> comps;
  Eigen::Index counter = 0;

  struct Frame {
    Eigen::Index v;
    std::size_t edge;
  };
  for (Eigen::Index root = 0; root < n; ++root) {
    if (order[root] != -1)
      continue;
    std::vector<Frame> frames{{root, 0}};
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        const Eigen::Index w = adj[f.v][f.edge++];
        if (order[w] == -1) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], order[w]);
        }
      } else {
        if (low[f.v] == order[f.v]) {
          std::vector<Eigen::Index> comp;
          for (;;) {
            const Eigen::Index w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
            if (w == f.v)
              break;
          }
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
        const Eigen::Index v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

Eigen::VectorXd stationary_distribution(const Chain& chain) {
  if (chain.cached_mu())
    return *chain.cached_mu();
  const Eigen::MatrixXd& p = chain.p();
  const Eigen::Index n = p.rows();

  const auto comps = strongly_connected_components(p);
  if (comps.size() > 1)
    throw std::invalid_argument(
        "stationary_distribution: chain is reducible; strongly connected components: " +
        components_text(comps));

  // Stack the balance equations over the normalization row and solve by
  // least squares; the system is consistent, so the residual should vanish.
  Eigen::MatrixXd a(n + 1, n);
  a.topRows(n) = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b[n] = 1.0;
  Eigen::VectorXd mu = a.colPivHouseholderQr().solve(b);

  auto clean = [n](Eigen::VectorXd& m) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (m[i] < 0.0 && m[i] > -1e-12)
        m[i] = 0.0;
    const double sum = m.sum();
    if (sum > 0.0)
      m /= sum;
  };
  clean(mu);

  if (mu.minCoeff() < 0.0 || stationarity_residual(p, mu) > 1e-10) {
    // Power iteration on the lazy chain, which is aperiodic whenever the
    // original is irreducible.
    const Eigen::MatrixXd lazy = 0.5 * (p + Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 200000; ++it) {
      Eigen::VectorXd w = lazy.transpose() * v;
      w /= w.sum();
      const double step = (w - v).cwiseAbs().maxCoeff();
      v = std::move(w);
      if (step < 1e-15)
        break;
    }
    mu = v;
    clean(mu);
    if (mu.minCoeff() < 0.0 || stationarity_residual(p, mu) > 1e-10)
      throw std::runtime_error("stationary_distribution: iteration stalled, residual = " +
                               std::to_string(stationarity_residual(p, mu)));
  }
  return mu;
}

ReversibilityCertificate check_reversibility(const Chain& chain, double tol) {
  const Eigen::MatrixXd& p = chain.p();
  const Eigen::VectorXd mu = stationary_distribution(chain);
  ReversibilityCertificate cert;
  cert.tolerance = tol;
  for (Eigen::Index s = 0; s < p.rows(); ++s)
    for (Eigen::Index t = s + 1; t < p.cols(); ++t) {
      cert.max_violation =
          std::max(cert.max_violation, std::abs(mu[s] * p(s, t) - mu[t] * p(t, s)));
      if (p(s, t) > 0.0 && p(t, s) == 0.0)
        cert.one_way_edges.emplace_back(s, t);
      else if (p(t, s) > 0.0 && p(s, t) == 0.0)
        cert.one_way_edges.emplace_back(t, s);
    }
  cert.structural_ok = cert.one_way_edges.empty();
  cert.pass = cert.structural_ok && cert.max_violation <= tol;
  return cert;
}

double dirichlet_norm_sq(const Eigen::VectorXd& f, const Chain& chain) {
  if (f.size() != chain.size())
    throw std::invalid_argument("dirichlet_norm_sq: f has size " + std::to_string(f.size()) +
                                ", chain has " + std::to_string(chain.size()) + " states");
  const Eigen::MatrixXd& p = chain.p();
  const Eigen::VectorXd mu = stationary_distribution(chain);
  double acc = 0.0;
  for (Eigen::Index s = 0; s < p.rows(); ++s)
    for (Eigen::Index t = 0; t < p.cols(); ++t)
      if (p(s, t) > 0.0) {
        const double d = f[t] - f[s];
        acc += mu[s] * p(s, t) * d * d;
      }
  return 0.5 * acc;
}

double dirichlet_via_operator(const Eigen::VectorXd& f, const Chain& chain) {
  if (f.size() != chain.size())
    throw std::invalid_argument("dirichlet_via_operator: f has size " +
                                std::to_string(f.size()) + ", chain has " +
                                std::to_string(chain.size()) + " states");
  const Eigen::VectorXd mu = stationary_distribution(chain);
  return mu_inner(f - chain.p() * f, f, mu);
}

SpectralReport spectral_gap(const Chain& chain) {
  const Eigen::Index n = chain.size();
  if (n == 1)
    return {2.0, -1.0, 1.0, true};

  const ReversibilityCertificate cert =
      chain.certificate() ? *chain.certificate() : check_reversibility(chain);
  if (!cert.pass)
    throw std::invalid_argument(
        "spectral_gap: chain is not reversible (max balance violation " +
        std::to_string(cert.max_violation) + ", " +
        std::to_string(cert.one_way_edges.size()) + " one-way edges)");

  const Eigen::VectorXd mu = stationary_distribution(chain);
  if (mu.minCoeff() <= 0.0)
    throw std::invalid_argument("spectral_gap: stationary distribution has a zero entry");

  const Eigen::VectorXd root = mu.cwiseSqrt();
  Eigen::MatrixXd sym =
      root.asDiagonal() * chain.p() * root.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_gap: eigenvalue solver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending

  if (std::abs(ev[n - 1] - 1.0) > 1e-8)
    throw std::runtime_error("spectral_gap: leading eigenvalue is " +
                             std::to_string(ev[n - 1]) + ", expected 1");
  if (ev[n - 2] >= 1.0 - 1e-10)
    throw std::invalid_argument(
        "spectral_gap: eigenvalue 1 is not simple, the chain decomposes");

  SpectralReport report;
  report.lambda2 = ev[n - 2];
  report.lambda_min = ev[0];
  report.beta = 1.0 - report.lambda2;
  report.psd = report.lambda_min >= -1e-10;
  return report;
}

Eigen::Index grid_node_count(const GridSpec& spec) {
  validate_grid(spec);
  Eigen::Index count = 1;
  for (int k = 0; k < spec.dim; ++k)
    count *= spec.extent;
  return count;
}

std::array<Eigen::Index, 3> grid_coords(const GridSpec& spec, Eigen::Index node) {
  if (node < 0 || node >= grid_node_count(spec))
    throw std::invalid_argument("grid_coords: node " + std::to_string(node) + " out of range");
  std::array<Eigen::Index, 3> coords{0, 0, 0};
  for (int k = 0; k < spec.dim; ++k) {
    coords[k] = node % spec.extent;
    node /= spec.extent;
  }
  return coords;
}

Eigen::Index grid_index(const GridSpec& spec, const std::array<Eigen::Index, 3>& coords) {
  validate_grid(spec);
  Eigen::Index node = 0;
  for (int k = spec.dim - 1; k >= 0; --k) {
    if (coords[k] < 0 || coords[k] >= spec.extent)
      throw std::invalid_argument("grid_index: coordinate " + std::to_string(coords[k]) +
                                  " on axis " + std::to_string(k) + " out of range");
    node = node * spec.extent + coords[k];
  }
  return node;
}

double grid_position(const GridSpec& spec, Eigen::Index node, int axis) {
  if (axis < 0 || axis >= spec.dim)
    throw std::invalid_argument("grid_position: axis " + std::to_string(axis) + " out of range");
  return static_cast<double>(grid_coords(spec, node)[axis]) * spec.eps;
}

Chain grid_walk_chain(const GridSpec& spec) {
  const Eigen::Index count = grid_node_count(spec);
  const double move = 1.0 / (2.0 * spec.dim);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(count, count);
  for (Eigen::Index node = 0; node < count; ++node) {
    const auto coords = grid_coords(spec, node);
    for (int k = 0; k < spec.dim; ++k)
      for (int d : {-1, 1}) {
        auto moved = coords;
        moved[k] += d;
        if (moved[k] >= 0 && moved[k] < spec.extent)
          p(node, grid_index(spec, moved)) += move;
        else
          p(node, node) += move;  // blocked moves wait in place
      }
  }
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));

  // The construction gives each unordered neighbour pair the same mass in both
  // directions, so the certificate follows from the asymmetry of p itself.
  ReversibilityCertificate cert;
  cert.tolerance = 1e-10;
  cert.max_violation =
      (p - p.transpose()).cwiseAbs().maxCoeff() / static_cast<double>(count);
  cert.structural_ok = true;
  cert.pass = cert.max_violation <= cert.tolerance;
  return Chain(std::move(p), mu, cert);
}

GridTaylorResult grid_taylor_check(const Eigen::VectorXd& f, const GridSpec& spec) {
  const Eigen::Index count = grid_node_count(spec);
  if (f.size() != count)
    throw std::invalid_argument("grid_taylor_check: f has size " + std::to_string(f.size()) +
                                ", grid has " + std::to_string(count) + " nodes");

  for (Eigen::Index node = 0; node < count; ++node) {
    const auto coords = grid_coords(spec, node);
    bool near_boundary = false;
    for (int k = 0; k < spec.dim; ++k)
      near_boundary = near_boundary || coords[k] <= 1 || coords[k] >= spec.extent - 2;
    if (near_boundary && std::abs(f[node]) > 1e-12)
      throw std::invalid_argument(
          "grid_taylor_check: field must vanish on the two outermost layers, |f| = " +
          std::to_string(std::abs(f[node])) + " at node " + std::to_string(node));
  }

  const Chain chain = grid_walk_chain(spec);
  GridTaylorResult result;
  result.dir_norm = dirichlet_norm_sq(f, chain);

  // Centered differences where both neighbours exist; the precondition keeps
  // f negligible wherever they do not.
  double grad_sq_sum = 0.0;
  for (Eigen::Index node = 0; node < count; ++node) {
    const auto coords = grid_coords(spec, node);
    bool interior = true;
    for (int k = 0; k < spec.dim; ++k)
      interior = interior && coords[k] >= 1 && coords[k] <= spec.extent - 2;
    if (!interior)
      continue;
    for (int k = 0; k < spec.dim; ++k) {
      auto up = coords, down = coords;
      ++up[k];
      --down[k];
      const double g =
          (f[grid_index(spec, up)] - f[grid_index(spec, down)]) / (2.0 * spec.eps);
      grad_sq_sum += g * g;
    }
  }
  result.continuum_estimate = spec.eps * spec.eps / (2.0 * spec.dim) * grad_sq_sum /
                              static_cast<double>(count);

  if (result.continuum_estimate == 0.0)
    result.ratio = result.dir_norm == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  else
    result.ratio = result.dir_norm / result.continuum_estimate;
  return result;
}

}
