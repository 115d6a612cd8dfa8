#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "radv/error.hpp"
#include "radv/evaluation.hpp"

using namespace radv;
using namespace radv::testing;

namespace {

// s0 -> s1 -> s2 (terminal) whichever action is taken.
Mdp two_step_mdp() {
  MdpDefinition def;
  def.n_states = 3;
  def.n_actions = 2;
  def.gamma = 1.0;
  def.mu0 = StateVector::Unit(3, 0);
  def.terminals = {2};
  def.transitions = {{{1, 1.0}}, {{1, 1.0}}, {{2, 1.0}}, {{2, 1.0}}, {}, {}};
  complete_terminal_rows(def);
  return Mdp(std::move(def));
}

Table chain_rewards() {
  Table r = Table::Zero(3, 2);
  r << 1.0, 2.0, 3.0, 4.0, 0.0, 0.0;
  return r;
}

}  // namespace

TEST_CASE("one-step MDP: Q(s0) equals the immediate rewards under any policy") {
  const Mdp mdp = one_step_mdp(4.0, 1.0);
  Engine rng(1);
  for (int i = 0; i < 5; ++i) {
    const auto policy = random_positive_policy(rng, 2, 2);
    const Table q = policy_evaluation_q(mdp, policy);
    CHECK(q(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(q(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.row(1).isZero(0.0));
  }
}

TEST_CASE("zero rewards give Q = 0") {
  Engine rng(2);
  RandomMdpOptions opts;
  opts.reward_scale = 0.0;
  const Mdp mdp = random_mdp(rng, opts);
  const Table q = policy_evaluation_q(mdp, StochasticPolicy::uniform(mdp.n_states(), mdp.n_actions()));
  CHECK(q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("3-state chain with gamma 0.9 matches a long rollout and the hand values") {
  const Mdp mdp = chain_mdp(3, chain_rewards(), 0.9);
  const auto policy = deterministic_policy(3, 2, 0);
  const Table q = policy_evaluation_q(mdp, policy);
  const Table rollout = rollout_q(mdp, policy, 200);
  CHECK((q - rollout).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(q(1, 0) == doctest::Approx(3.0));
  CHECK(q(1, 1) == doctest::Approx(4.0 + 0.9 * 3.0));
  CHECK(q(0, 0) == doctest::Approx(1.0 + 0.9 * 3.0));
  CHECK(q(0, 1) == doctest::Approx(2.0 + 0.9 * 3.7));
}

TEST_CASE("policy evaluation agrees with the dense pair-level solve") {
  Engine rng(3);
  for (int i = 0; i < 40; ++i) {
    RandomMdpOptions opts;
    opts.gamma = i % 2 ? 1.0 : 0.9;
    const Mdp mdp = random_mdp(rng, opts);
    const auto policy = random_positive_policy(rng, mdp.n_states(), mdp.n_actions());
    const Table q = policy_evaluation_q(mdp, policy);
    CHECK((q - dense_q(mdp, policy)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(evaluation_residual(mdp, policy, q) <= 1e-10);
  }
}

TEST_CASE("a policy that never terminates at gamma = 1 is reported, not looped") {
  const Mdp mdp = chain_mdp(3, chain_rewards(), 1.0);
  const auto stay = deterministic_policy(3, 2, 1);
  try {
    policy_evaluation_q(mdp, stay, {1e-10, 500});
    FAIL("expected nonconvergent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nonconvergent);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("visitation: one-step uniform policy") {
  const Mdp mdp = one_step_mdp(4.0, 1.0);
  const Table d = visitation_frequencies(mdp, StochasticPolicy::uniform(2, 2));
  CHECK(d(0, 0) == doctest::Approx(0.5));
  CHECK(d(0, 1) == doctest::Approx(0.5));
  CHECK(d.row(1).isZero(0.0));
}

TEST_CASE("visitation: deterministic chain gives unit flow on the path") {
  const Mdp mdp = chain_mdp(3, chain_rewards(), 1.0);
  const Table d = visitation_frequencies(mdp, deterministic_policy(3, 2, 0));
  Table want = Table::Zero(3, 2);
  want(0, 0) = 1.0;
  want(1, 0) = 1.0;
  CHECK((d - want).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("visitation agrees with the dense solve and conserves flow") {
  Engine rng(4);
  for (int i = 0; i < 40; ++i) {
    RandomMdpOptions opts;
    opts.gamma = i % 2 ? 1.0 : 0.9;
    const Mdp mdp = random_mdp(rng, opts);
    const auto policy = random_positive_policy(rng, mdp.n_states(), mdp.n_actions());
    const Table d = visitation_frequencies(mdp, policy);
    CHECK((d - dense_visitation(mdp, policy)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(flow_imbalance(mdp, d) <= 1e-8);
    CHECK(d.minCoeff() >= 0.0);
  }
}

TEST_CASE("visitation matches a Monte-Carlo estimate within 3 standard errors") {
  Engine rng(8);
  RandomMdpOptions opts;
  opts.min_states = opts.max_states = 8;
  opts.min_actions = opts.max_actions = 3;
  opts.gamma = 1.0;
  const Mdp mdp = random_mdp(rng, opts);
  const auto policy = random_positive_policy(rng, mdp.n_states(), mdp.n_actions());
  const Table d = visitation_frequencies(mdp, policy);
  const auto mc = monte_carlo_visitation(mdp, policy, 200000, 99);
  for (Index s = 0; s < mdp.n_states(); ++s) {
    for (Index a = 0; a < mdp.n_actions(); ++a) {
      CAPTURE(s);
      CAPTURE(a);
      CHECK(std::abs(d(s, a) - mc.mean(s, a)) <= 3.0 * mc.std_error(s, a) + 1e-12);
    }
  }
}

TEST_CASE("causal entropy of simple cases") {
  const Mdp one = one_step_mdp(0.0, 0.0);
  const auto uniform2 = StochasticPolicy::uniform(2, 2);
  Table d = Table::Zero(2, 2);
  d(0, 0) = d(0, 1) = 0.5;
  CHECK(causal_entropy(d, uniform2) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  const auto det = deterministic_policy(2, 2, 0);
  CHECK(causal_entropy(visitation_frequencies(one, det), det) == 0.0);

  const Mdp two = two_step_mdp();
  const auto u = StochasticPolicy::uniform(3, 2);
  const double h = causal_entropy(visitation_frequencies(two, u), u);
  CHECK(h == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(h == doctest::Approx(enumerated_causal_entropy(two, u, 10)).epsilon(1e-12));
}

TEST_CASE("causal entropy matches trajectory enumeration on a layered MDP") {
  Engine rng(12);
  // Layered so every episode ends within 4 steps: state i moves to states > i.
  MdpDefinition def;
  def.n_states = 5;
  def.n_actions = 3;
  def.gamma = 1.0;
  def.terminals = {4};
  def.mu0 = StateVector::Zero(5);
  def.mu0 << 0.6, 0.4, 0.0, 0.0, 0.0;
  def.transitions.resize(15);
  for (Index s = 0; s < 4; ++s) {
    for (Index a = 0; a < 3; ++a) {
      auto& row = def.transitions[static_cast<std::size_t>(s * 3 + a)];
      double left = 1.0;
      for (Index t = s + 1; t < 4; ++t) {
        const double p = left * uniform(rng, 0.2, 0.7);
        row.push_back({t, p});
        left -= p;
      }
      row.push_back({4, left});
    }
  }
  complete_terminal_rows(def);
  const Mdp mdp(std::move(def));
  const auto policy = random_positive_policy(rng, 5, 3);
  const double h = causal_entropy(visitation_frequencies(mdp, policy), policy);
  CHECK(h == doctest::Approx(enumerated_causal_entropy(mdp, policy, 10)).epsilon(1e-10));
}

TEST_CASE("causal entropy: 0 ln 0 terms vanish, positive visits need support") {
  Table p(1, 2);
  p << 1.0, 0.0;
  const StochasticPolicy policy(p);
  Table d(1, 2);
  d << 2.0, 0.0;
  CHECK(causal_entropy(d, policy) == 0.0);
  d << 2.0, 0.1;
  CHECK_THROWS_AS(causal_entropy(d, policy), Error);
  try {
    causal_entropy(d, policy);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::entropy_domain);
  }
}

TEST_CASE("expected return") {
  CHECK(expected_return(one_step_mdp(4.0, 1.0), StochasticPolicy::uniform(2, 2)) == doctest::Approx(2.5));
  CHECK(expected_return(one_step_mdp(0.0, 0.0), StochasticPolicy::uniform(2, 2)) == 0.0);

  Engine rng(13);
  for (int i = 0; i < 30; ++i) {
    RandomMdpOptions opts;
    opts.gamma = i % 2 ? 1.0 : 0.9;
    const Mdp mdp = random_mdp(rng, opts);
    const auto policy = random_positive_policy(rng, mdp.n_states(), mdp.n_actions());
    const double by_q = mdp.mu0().dot(policy.probs().cwiseProduct(dense_q(mdp, policy)).rowwise().sum());
    CHECK(std::abs(expected_return(mdp, policy) - by_q) <= 1e-8);
  }
}
