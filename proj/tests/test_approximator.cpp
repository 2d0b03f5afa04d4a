#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tdlab/approximator.hpp"
#include "tdlab/generators.hpp"
#include "tdlab/rng.hpp"

using namespace tdlab;

TEST_CASE("tabular family is the identity map") {
  const auto tab = make_tabular(3);
  CHECK(tab->family() == "tabular");
  CHECK(tab->state_count() == 3);
  CHECK(tab->param_count() == 3);
  CHECK(tab->initial_theta().isZero());

  Eigen::VectorXd theta(3);
  theta << 0.5, -1.0, 2.0;
  CHECK(tab->value(theta, 1) == -1.0);
  CHECK((tab->grad(theta, 1) - Eigen::Vector3d(0.0, 1.0, 0.0)).norm() == 0.0);
  CHECK((tab->values(theta) - theta).norm() == 0.0);
  REQUIRE(tab->features() != nullptr);
  CHECK(tab->features()->isIdentity(0.0));
}

TEST_CASE("linear family applies its feature rows") {
  Eigen::MatrixXd phi(2, 3);
  phi << 1.0, 0.0, 2.0, 0.5, -1.0, 0.0;
  const auto lin = make_linear(phi);
  CHECK(lin->family() == "linear");
  CHECK(lin->param_count() == 3);

  Eigen::VectorXd theta(3);
  theta << 1.0, 2.0, 3.0;
  CHECK(lin->value(theta, 0) == doctest::Approx(7.0));   // 1 + 0 + 6
  CHECK(lin->value(theta, 1) == doctest::Approx(-1.5));  // 0.5 - 2
  CHECK((lin->grad(theta, 1) - phi.row(1).transpose()).norm() == 0.0);
  REQUIRE(lin->features() != nullptr);
}

TEST_CASE("two_layer frozen scalar network") {
  // One state, scalar embedding x = 1, width 1:
  // value = w tanh(W x + b) + c with theta = (W, b, w, c) = (2, 0.5, 3, -1).
  Eigen::MatrixXd embed(1, 1);
  embed << 1.0;
  const auto net = make_two_layer(embed, 1, 0);
  CHECK(net->family() == "two_layer");
  CHECK(net->param_count() == 4);

  Eigen::VectorXd theta(4);
  theta << 2.0, 0.5, 3.0, -1.0;
  CHECK(net->value(theta, 0) == doctest::Approx(3.0 * std::tanh(2.5) - 1.0).epsilon(1e-15));
  CHECK(net->features() == nullptr);
}

TEST_CASE("two_layer gradients match finite differences") {
  Rng rng(17);
  const auto net = make_two_layer(random_matrix(5, 3, 1.0, rng), 4, 99);
  const Eigen::VectorXd theta = random_vector(net->param_count(), 0.7, rng);
  for (Eigen::Index s = 0; s < 5; ++s)
    CHECK(grad_check(*net, theta, s) <= 1e-6);
}

TEST_CASE("tabular and linear gradients are exact under grad_check") {
  Rng rng(18);
  const auto tab = make_tabular(4);
  const auto lin = make_linear(random_matrix(4, 2, 1.0, rng));
  const Eigen::VectorXd t1 = random_vector(4, 1.0, rng);
  const Eigen::VectorXd t2 = random_vector(2, 1.0, rng);
  CHECK(grad_check(*tab, t1, 2) <= 1e-9);
  CHECK(grad_check(*lin, t2, 3) <= 1e-9);
}

TEST_CASE("two_layer initialization is seeded and bounded") {
  const auto a = make_two_layer(6, 4, 123);
  const auto b = make_two_layer(6, 4, 123);
  const auto c = make_two_layer(6, 4, 124);
  CHECK((a->initial_theta() - b->initial_theta()).norm() == 0.0);
  CHECK((a->initial_theta() - c->initial_theta()).norm() > 0.0);
  CHECK(a->initial_theta().cwiseAbs().maxCoeff() <= 0.5);
}

TEST_CASE("one-hot overload equals an explicit identity embedding") {
  const auto onehot = make_two_layer(3, 2, 55);
  const auto manual = make_two_layer(Eigen::MatrixXd::Identity(3, 3), 2, 55);
  const Eigen::VectorXd theta = onehot->initial_theta();
  REQUIRE(onehot->param_count() == manual->param_count());
  for (Eigen::Index s = 0; s < 3; ++s)
    CHECK(onehot->value(theta, s) == manual->value(theta, s));
}

TEST_CASE("families validate state and theta dimensions") {
  const auto tab = make_tabular(2);
  Eigen::VectorXd theta(2);
  theta.setZero();
  CHECK_THROWS_AS(tab->value(theta, 5), std::invalid_argument);
  CHECK_THROWS_AS(tab->value(Eigen::VectorXd::Zero(3), 0), std::invalid_argument);
  CHECK_THROWS_AS(make_tabular(0), std::invalid_argument);
}
