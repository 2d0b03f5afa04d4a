#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "tdlab/mdp.hpp"

using namespace tdlab;

namespace {

// Two states. State 0 mixes a lazy action with a jump; state 1 always returns.
Mdp two_state_mdp() {
  Mdp mdp;
  mdp.n_states = 2;
  mdp.actions.resize(2);
  mdp.actions[0].push_back({"stay_or_go", {{0, 0.5}, {1, 0.5}}, {{0, 1.0}, {1, 0.0}}});
  mdp.actions[0].push_back({"go", {{1, 1.0}}, {{1, 2.0}}});
  mdp.actions[1].push_back({"back", {{0, 1.0}}, {{0, -1.0}}});
  return mdp;
}

PolicyTable two_state_policy(double p_first) {
  PolicyTable policy;
  policy.probs.resize(2);
  policy.probs[0] = Eigen::Vector2d(p_first, 1.0 - p_first);
  policy.probs[1] = Eigen::VectorXd::Ones(1);
  return policy;
}

}  // namespace

TEST_CASE("validate_mdp accepts a well-formed model") {
  CHECK(validate_mdp(two_state_mdp()).empty());
}

TEST_CASE("validate_mdp collects every violation") {
  Mdp mdp;
  mdp.n_states = 2;
  mdp.actions.resize(2);
  // Row sums to 0.9, next state 5 is out of range, state 0 repeats. The
  // second action indexes cleanly but lacks a reward for next state 0.
  mdp.actions[0].push_back({"bad", {{0, 0.4}, {0, 0.2}, {5, 0.3}}, {{5, 1.0}}});
  mdp.actions[0].push_back({"bad2", {{0, 0.5}, {1, 0.5}}, {{1, 0.0}}});
  mdp.reward_noise_std = -1.0;

  const std::vector<Diagnostic> problems = validate_mdp(mdp);
  CHECK(problems.size() >= 4);
  bool saw_row_sum = false, saw_range = false, saw_dup = false, saw_reward = false,
       saw_noise = false, saw_empty = false;
  for (const Diagnostic& d : problems) {
    if (d.message.find("sum") != std::string::npos) saw_row_sum = true;
    if (d.message.find("range") != std::string::npos) saw_range = true;
    if (d.message.find("twice") != std::string::npos || d.message.find("duplicate") != std::string::npos)
      saw_dup = true;
    if (d.message.find("reward") != std::string::npos) saw_reward = true;
    if (d.location.find("noise") != std::string::npos) saw_noise = true;
    if (d.message.find("no actions") != std::string::npos) saw_empty = true;
  }
  CHECK(saw_row_sum);
  CHECK(saw_range);
  CHECK(saw_dup);
  CHECK(saw_reward);
  CHECK(saw_noise);
  CHECK(saw_empty);  // state 1 has no actions
}

TEST_CASE("induced_chain and expected_reward_vector match hand values") {
  const Mdp mdp = two_state_mdp();
  const PolicyTable policy = two_state_policy(0.4);
  const Chain chain = induced_chain(mdp, policy);

  CHECK(chain.p()(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(chain.p()(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(chain.p()(1, 0) == 1.0);
  CHECK(chain.p()(1, 1) == 0.0);

  const Eigen::VectorXd r = expected_reward_vector(mdp, policy);
  CHECK(r[0] == doctest::Approx(1.4).epsilon(1e-15));  // 0.4*0.5*1 + 0.6*2
  CHECK(r[1] == doctest::Approx(-1.0));
}

TEST_CASE("induced_chain is linear in the policy mix") {
  const Mdp mdp = two_state_mdp();
  const Eigen::MatrixXd a = induced_chain(mdp, two_state_policy(1.0)).p();
  const Eigen::MatrixXd b = induced_chain(mdp, two_state_policy(0.0)).p();
  const Eigen::MatrixXd mixed = induced_chain(mdp, two_state_policy(0.3)).p();
  CHECK((mixed - (0.3 * a + 0.7 * b)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("edge_reward_matrix conditions on the realized jump") {
  const Mdp mdp = two_state_mdp();
  const PolicyTable policy = two_state_policy(0.4);
  const Eigen::MatrixXd er = edge_reward_matrix(mdp, policy);
  // Jump 0 -> 0 only happens through the first action, reward 1.
  CHECK(er(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  // Jump 0 -> 1 mixes reward 0 (mass 0.2) with reward 2 (mass 0.6).
  CHECK(er(0, 1) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(er(1, 0) == doctest::Approx(-1.0));
  CHECK(er(1, 1) == 0.0);  // off the support
}

TEST_CASE("mean_reward throws when a reachable transition has no reward") {
  Mdp mdp;
  mdp.n_states = 2;
  mdp.actions.resize(2);
  mdp.actions[0].push_back({"a", {{0, 0.5}, {1, 0.5}}, {{0, 1.0}}});
  mdp.actions[1].push_back({"b", {{1, 1.0}}, {{1, 0.0}}});
  CHECK(mdp.mean_reward(0, 0, 0) == 1.0);
  CHECK_THROWS_AS(mdp.mean_reward(0, 0, 1), std::invalid_argument);
}

TEST_CASE("check_policy rejects malformed policies") {
  const Mdp mdp = two_state_mdp();
  PolicyTable policy = two_state_policy(0.4);
  CHECK_NOTHROW(check_policy(mdp, policy));

  policy.probs[0] = Eigen::Vector2d(0.4, 0.4);  // off the simplex
  CHECK_THROWS_AS(check_policy(mdp, policy), std::invalid_argument);

  policy = two_state_policy(0.4);
  policy.probs[0] = Eigen::Vector3d(0.2, 0.3, 0.5);  // wrong arity
  CHECK_THROWS_AS(check_policy(mdp, policy), std::invalid_argument);

  policy = two_state_policy(0.4);
  policy.probs.pop_back();  // missing state
  CHECK_THROWS_AS(check_policy(mdp, policy), std::invalid_argument);
}

TEST_CASE("sample_transition follows point-mass kernels exactly") {
  const Mdp mdp = two_state_mdp();
  const PolicyTable policy = two_state_policy(0.0);  // always the jump action
  Rng rng(7);
  const Transition tr = sample_transition(mdp, policy, 0, rng);
  CHECK(tr.action == 1);
  CHECK(tr.next == 1);
  CHECK(tr.reward == 2.0);  // noise std is zero, so the mean comes back exactly
}

TEST_CASE("sample_transition adds noise only when asked") {
  Mdp mdp = two_state_mdp();
  mdp.reward_noise_std = 0.5;
  const PolicyTable policy = two_state_policy(0.0);
  Rng rng(7);
  const Transition noisy = sample_transition(mdp, policy, 0, rng);
  CHECK(noisy.reward != 2.0);
  CHECK(std::abs(noisy.reward - 2.0) < 5.0);
}

TEST_CASE("sample_transition frequencies match the kernel") {
  const Mdp mdp = two_state_mdp();
  const PolicyTable policy = two_state_policy(1.0);  // the 50/50 action
  Rng rng(11);
  int stays = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    if (sample_transition(mdp, policy, 0, rng).next == 0)
      ++stays;
  CHECK(std::abs(stays / static_cast<double>(n) - 0.5) < 0.02);
}

TEST_CASE("Chain constructor validates its input") {
  Eigen::MatrixXd good(2, 2);
  good << 0.5, 0.5, 0.25, 0.75;
  CHECK_NOTHROW(Chain{good});

  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(Chain{rect}, std::invalid_argument);

  Eigen::MatrixXd negative = good;
  negative(0, 0) = -0.1;
  negative(0, 1) = 1.1;
  CHECK_THROWS_AS(Chain{negative}, std::invalid_argument);

  Eigen::MatrixXd off = good;
  off(1, 1) = 0.8;  // row sums to 1.05
  CHECK_THROWS_AS(Chain{off}, std::invalid_argument);

  Eigen::VectorXd bad_mu(2);
  bad_mu << 0.7, 0.7;
  CHECK_THROWS_AS(Chain(good, bad_mu), std::invalid_argument);
}
