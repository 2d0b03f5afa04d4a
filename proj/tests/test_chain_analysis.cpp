#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tdlab/chain_analysis.hpp"
#include "tdlab/generators.hpp"
#include "tdlab/reversible.hpp"

using namespace tdlab;

namespace {

Chain rotation3() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
  p(0, 1) = 1.0;
  p(1, 2) = 1.0;
  p(2, 0) = 1.0;
  return Chain(p);
}

Chain swap2() {
  Eigen::MatrixXd p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  return Chain(p);
}

}  // namespace

TEST_CASE("stationary_distribution solves a 2-state chain by hand") {
  Eigen::MatrixXd p(2, 2);
  p << 0.8, 0.2, 0.4, 0.6;
  const Eigen::VectorXd mu = stationary_distribution(Chain(p));
  CHECK(mu[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(mu[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary_distribution returns the cached vector untouched") {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd mu(2);
  mu << 0.5, 0.5;
  const Chain chain(p, mu);
  CHECK((stationary_distribution(chain) - mu).norm() == 0.0);
}

TEST_CASE("stationary_distribution rejects reducible chains") {
  CHECK_THROWS_AS(stationary_distribution(Chain(Eigen::MatrixXd::Identity(2, 2))),
                  std::invalid_argument);
}

TEST_CASE("strongly_connected_components splits and merges correctly") {
  CHECK(strongly_connected_components(Eigen::MatrixXd::Identity(3, 3)).size() == 3);
  CHECK(strongly_connected_components(rotation3().p()).size() == 1);

  // One-way bridge between two loops: components listed by smallest member.
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
  p(0, 0) = 0.5;
  p(0, 1) = 0.5;
  p(1, 1) = 1.0;
  const auto comps = strongly_connected_components(p);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<Eigen::Index>{0});
  CHECK(comps[1] == std::vector<Eigen::Index>{1});
}

TEST_CASE("check_reversibility certifies two-state chains and flags cycles") {
  Eigen::MatrixXd p(2, 2);
  p << 0.8, 0.2, 0.4, 0.6;
  const ReversibilityCertificate ok = check_reversibility(Chain(p));
  CHECK(ok.pass);
  CHECK(ok.structural_ok);
  CHECK(ok.max_violation <= 1e-12);

  const ReversibilityCertificate bad = check_reversibility(rotation3());
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.structural_ok);
  CHECK(bad.one_way_edges.size() == 3);
  CHECK(bad.max_violation == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dirichlet_norm_sq on the triangle walk") {
  const Chain chain = simple_random_walk(complete_graph(3));
  Eigen::VectorXd f(3);
  f << 0.0, 1.0, 2.0;
  CHECK(dirichlet_norm_sq(f, chain) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator form of the Dirichlet norm agrees, reversible or not") {
  const Chain rot = rotation3();
  Eigen::VectorXd f(3);
  f << 0.3, -1.2, 0.7;
  CHECK(dirichlet_via_operator(f, rot) ==
        doctest::Approx(dirichlet_norm_sq(f, rot)).epsilon(1e-13));

  Rng rng(5);
  const Chain rev = random_reversible_chain(4, 9, rng);
  const Eigen::VectorXd g = random_vector(rev.size(), 1.0, rng);
  CHECK(dirichlet_via_operator(g, rev) ==
        doctest::Approx(dirichlet_norm_sq(g, rev)).epsilon(1e-13));
}

TEST_CASE("spectral_gap matches closed forms") {
  const SpectralReport swap = spectral_gap(swap2());
  CHECK(swap.beta == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(swap.lambda_min == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK_FALSE(swap.psd);

  const SpectralReport cycle = spectral_gap(simple_random_walk(cycle_graph(20)));
  CHECK(std::abs(cycle.beta - (1.0 - std::cos(2.0 * std::numbers::pi / 20.0))) <= 1e-10);

  const SpectralReport lone = spectral_gap(Chain(Eigen::MatrixXd::Ones(1, 1)));
  CHECK(lone.beta == 2.0);
  CHECK(lone.lambda2 == -1.0);
  CHECK(lone.psd);
}

TEST_CASE("spectral_gap rejects non-reversible and disconnected inputs") {
  CHECK_THROWS_AS(spectral_gap(rotation3()), std::invalid_argument);

  // Two frozen states: detailed balance holds trivially, but eigenvalue 1 is
  // not simple, which the eigensolver must flag.
  Eigen::VectorXd mu(2);
  mu << 0.5, 0.5;
  const Chain frozen(Eigen::MatrixXd::Identity(2, 2), mu);
  CHECK_THROWS_AS(spectral_gap(frozen), std::invalid_argument);
}

TEST_CASE("grid indexing round-trips and the walk reflects at the boundary") {
  const GridSpec spec{2, 0.1, 5};
  CHECK(grid_node_count(spec) == 25);
  for (Eigen::Index node = 0; node < 25; ++node)
    CHECK(grid_index(spec, grid_coords(spec, node)) == node);
  CHECK(grid_position(spec, 7, 0) == doctest::Approx(0.2));  // node 7 = (2, 1)
  CHECK(grid_position(spec, 7, 1) == doctest::Approx(0.1));

  const Chain walk = grid_walk_chain({1, 0.5, 4});
  // Interior node: half left, half right. Corner: half stays put.
  CHECK(walk.p()(1, 0) == doctest::Approx(0.5));
  CHECK(walk.p()(1, 2) == doctest::Approx(0.5));
  CHECK(walk.p()(0, 0) == doctest::Approx(0.5));
  CHECK(walk.p()(0, 1) == doctest::Approx(0.5));
  REQUIRE(walk.certificate().has_value());
  CHECK(walk.certificate()->pass);
}

TEST_CASE("grid_taylor_check needs a field that dies at the boundary") {
  const GridSpec spec{1, 0.1, 11};
  CHECK_THROWS_AS(grid_taylor_check(Eigen::VectorXd::Ones(11), spec), std::invalid_argument);

  // A compactly supported bump passes and lands near the continuum value.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(11);
  f[5] = 1.0;
  f[4] = 0.5;
  f[6] = 0.5;
  const GridTaylorResult result = grid_taylor_check(f, spec);
  CHECK(result.dir_norm > 0.0);
  CHECK(result.continuum_estimate > 0.0);
}

TEST_CASE("mu_inner checks dimensions") {
  Eigen::VectorXd a(2), b(3);
  a.setOnes();
  b.setOnes();
  CHECK_THROWS_AS(mu_inner(a, b, a), std::invalid_argument);
  CHECK(mu_inner(a, a, Eigen::VectorXd::Constant(2, 0.5)) == doctest::Approx(1.0));
}
