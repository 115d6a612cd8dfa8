#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "generators.hpp"
#include "radv/error.hpp"
#include "radv/io.hpp"

using namespace radv;
using namespace radv::testing;

namespace {

const char* kOneStep = R"({"n_states":2,"n_actions":2,"gamma":1,"mu0":[1,0],"terminals":[1],
  "transitions":[[0,0,1,1.0],[0,1,1,1.0]],"rewards":[[0,0,4],[0,1,1]]})";

}  // namespace

TEST_CASE("format_number keeps 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-4.0) == "-4");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("reading an MDP file") {
  const Mdp mdp = mdp_from_json(parse_json(kOneStep, "mdp"));
  CHECK(mdp.n_states() == 2);
  CHECK(mdp.rewards()(0, 0) == 4.0);
  CHECK(mdp.rewards()(1, 1) == 0.0);
  // Terminal rows were left out and become self-loops.
  REQUIRE(mdp.successors(1, 0).size() == 1);
  CHECK(mdp.successors(1, 0)[0].state == 1);
}

TEST_CASE("MDP, policy and table round trips are exact") {
  Engine rng(81);
  for (int i = 0; i < 10; ++i) {
    const Mdp mdp = random_mdp(rng);
    const Mdp back = mdp_from_json(parse_json(dump(mdp_to_json(mdp)), "mdp"));
    CHECK(back.rewards() == mdp.rewards());
    CHECK(back.mu0() == mdp.mu0());
    CHECK(back.gamma() == mdp.gamma());
    CHECK(back.terminals() == mdp.terminals());
    for (Index s = 0; s < mdp.n_states(); ++s) {
      for (Index a = 0; a < mdp.n_actions(); ++a) {
        const auto x = mdp.successors(s, a);
        const auto y = back.successors(s, a);
        REQUIRE(x.size() == y.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
          CHECK(x[j].state == y[j].state);
          CHECK(x[j].probability == y[j].probability);
        }
      }
    }

    const auto policy = random_positive_policy(rng, mdp.n_states(), mdp.n_actions());
    const auto p = policy_from_json(parse_json(dump(policy_to_json(policy)), "policy"), mdp.n_states(),
                                    mdp.n_actions());
    CHECK(p.probs() == policy.probs());

    const Table t = policy.probs().array().log();
    CHECK(table_from_json(parse_json(dump(table_to_json(t)), "t"), mdp.n_states(), mdp.n_actions(), "t") == t);
  }
}

TEST_CASE("malformed input is reported as invalid input") {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::no_data;
  };
  CHECK(kind([] { parse_json("{\"n_states\":", "mdp"); }) == ErrorKind::invalid_input);
  CHECK(kind([] { mdp_from_json(parse_json("{}", "mdp")); }) == ErrorKind::invalid_input);
  CHECK(kind([] { mdp_from_json(parse_json(R"({"n_states":"two"})", "mdp")); }) == ErrorKind::invalid_input);
  Json doc = parse_json(kOneStep, "mdp");
  doc["transitions"][0][2] = 1.5;
  CHECK(kind([&] { mdp_from_json(doc); }) == ErrorKind::invalid_input);
  doc = parse_json(kOneStep, "mdp");
  doc["transitions"][0][3] = 0.5;
  CHECK(kind([&] { mdp_from_json(doc); }) == ErrorKind::invalid_input);
  CHECK(kind([] { policy_from_json(parse_json(R"({"probs":[[0,5,1]]})", "p"), 2, 2); }) == ErrorKind::invalid_input);
  CHECK(kind([] { read_json_file("/nonexistent/file.json"); }) == ErrorKind::invalid_input);
}

TEST_CASE("trajectory lines") {
  std::istringstream in("[[0,1],[2,0,-0.5],[3,0]]\n\n[[1,0]]\n");
  const auto trajs = parse_trajectories(in);
  REQUIRE(trajs.size() == 2);
  REQUIRE(trajs[0].steps.size() == 3);
  CHECK(trajs[0].steps[0].state == 0);
  CHECK(trajs[0].steps[0].action == 1);
  CHECK_FALSE(trajs[0].steps[0].reward.has_value());
  CHECK(trajs[0].steps[1].reward == -0.5);
  std::istringstream back(trajectories_to_jsonl(trajs));
  CHECK(parse_trajectories(back) == trajs);

  std::istringstream bad("[[0,1,2,3]]\n");
  CHECK_THROWS_AS(parse_trajectories(bad), Error);
  std::istringstream garbage("not json\n");
  CHECK_THROWS_AS(parse_trajectories(garbage), Error);
}

TEST_CASE("feature files and bound overrides") {
  const auto file = features_from_json(
      parse_json(R"({"omega":[2,1],"phi":[1,1],"c_min":[0,0],"c_max":[2,3],"r_max":5})", "features"));
  CHECK(file.model.r_max() == 7.0);
  CHECK_FALSE(file.r_min.has_value());
  const auto bounds = file.bounds(2, 2);
  REQUIRE(bounds.has_value());
  CHECK(bounds->lower(0, 0) == 0.0);
  CHECK(bounds->upper(1, 1) == 5.0);

  const auto plain = features_from_json(features_to_json(file.model));
  CHECK_FALSE(plain.bounds(2, 2).has_value());
  CHECK(plain.model.omega() == file.model.omega());
}

TEST_CASE("beta files") {
  CHECK(beta_from_json(parse_json("[1,2,0]", "beta")) == Eigen::Vector3d(1, 2, 0));
  CHECK(beta_from_json(parse_json(R"({"beta":[0.5,0]})", "beta")) == Eigen::Vector2d(0.5, 0));
  CHECK_THROWS_AS(beta_from_json(parse_json(R"({"b":[1]})", "beta")), Error);
}

TEST_CASE("object-world spec round trip") {
  ObjectWorldSpec spec;
  spec.width = 4;
  spec.objects = {{1, "green"}, {5, "red"}};
  spec.destination = 7;
  spec.slip = 0.25;
  spec.seed = 9;
  const ObjectWorldSpec back = objectworld_spec_from_json(objectworld_spec_to_json(spec));
  CHECK(back.width == 4);
  CHECK(back.height == spec.height);
  CHECK(back.objects == spec.objects);
  CHECK(back.destination == spec.destination);
  CHECK(back.slip == 0.25);
  CHECK(back.seed == 9);
  CHECK(back.color_rewards == spec.color_rewards);

  const ObjectWorldSpec defaults = objectworld_spec_from_json(parse_json("{}", "spec"));
  CHECK(defaults.width == 9);
  CHECK(defaults.height == 5);
  CHECK(defaults.object_counts.at("red") == 3);
}

TEST_CASE("min-cost output lists assignments for nonterminal pairs only") {
  const Mdp mdp = mdp_from_json(parse_json(kOneStep, "mdp"));
  const FeatureModel f(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, -10.0),
                       Eigen::VectorXd::Zero(1));
  const Json doc = mincost_to_json(min_reward_solution(mdp, StochasticPolicy::uniform(2, 2), f));
  CHECK(doc.at("assignments").size() == 2);
  CHECK(doc.at("total_cost").get<double>() == doctest::Approx(-8.5));
  CHECK(doc.at("objective").get<double>() == doctest::Approx(-8.5));
}
