#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "rcpomdp/io.hpp"
#include "rcpomdp/model.hpp"

using namespace rcpomdp;

namespace {

// Joint P(s', o) by brute force, then condition on o.
std::vector<double> bayes_oracle(const Model& m, const Belief& b, int a, int o) {
  std::vector<double> joint(m.num_states(), 0.0);
  for (std::size_t s = 0; s < m.num_states(); ++s)
    for (std::size_t sp = 0; sp < m.num_states(); ++sp)
      joint[sp] += b[s] * m.transition(int(s), a, int(sp)) * m.observation(int(sp), a, o);
  double z = 0.0;
  for (double x : joint) z += x;
  for (double& x : joint) x /= z;
  return joint;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rcpomdp_" + name);
}

}  // namespace

TEST_CASE("belief update on a symmetric sensor") {
  auto m = fixtures::two_state_sensor(0.8);
  auto b = belief_update(m, m.initial_belief(), 0, 0);
  CHECK(b[0] == doctest::Approx(0.8));
  CHECK(b[1] == doctest::Approx(0.2));
}

TEST_CASE("point mass stays a point mass under deterministic dynamics") {
  ModelBuilder mb(3, 1, 3);
  for (int s = 0; s < 3; ++s) {
    mb.add_transition(s, 0, (s + 1) % 3, 1.0);
    mb.set_observation(s, 0, s, 1.0);
  }
  auto m = std::move(mb.initial_belief({1, 0, 0})).build();
  auto b = belief_update(m, Belief::point_mass(3, 0), 0, 1);
  CHECK(b == Belief::point_mass(3, 1));
  CHECK(observation_prob(m, Belief::point_mass(3, 0), 0, 1) == 1.0);
}

TEST_CASE("impossible observation is an error") {
  ModelBuilder mb(2, 1, 2);
  mb.add_transition(0, 0, 0, 1.0).add_transition(1, 0, 1, 1.0);
  mb.set_observation(0, 0, 0, 1.0).set_observation(1, 0, 1, 1.0);
  auto m = std::move(mb.initial_belief({1, 0})).build();
  CHECK_THROWS_AS(belief_update(m, m.initial_belief(), 0, 1), ZeroProbabilityObservation);
}

TEST_CASE("uniform sensor gives uniform observation probabilities") {
  ModelBuilder mb(2, 1, 4);
  for (int s = 0; s < 2; ++s) {
    mb.add_transition(s, 0, s, 1.0);
    for (int o = 0; o < 4; ++o) mb.set_observation(s, 0, o, 0.25);
  }
  auto m = std::move(mb.initial_belief({0.3, 0.7})).build();
  for (int o = 0; o < 4; ++o) CHECK(observation_prob(m, m.initial_belief(), 0, o) == doctest::Approx(0.25));
}

TEST_CASE("belief update matches the joint-enumeration oracle on random models") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = fixtures::random_model(rng, 4, 2, 3, 0.9);
    auto b = fixtures::random_belief(rng, 4);
    for (int a = 0; a < 2; ++a) {
      double total = 0.0;
      for (int o = 0; o < 3; ++o) {
        double p = observation_prob(m, b, a, o);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
        total += p;
        auto next = belief_update(m, b, a, o);
        auto oracle = bayes_oracle(m, b, a, o);
        double sum = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
          CHECK(next[s] >= 0.0);
          CHECK(next[s] == doctest::Approx(oracle[s]).epsilon(1e-12));
          sum += next[s];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
      }
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("successors agree with belief_update") {
  std::mt19937_64 rng(3);
  auto m = fixtures::random_model(rng, 5, 2, 3, 0.9);
  auto b = fixtures::random_belief(rng, 5);
  auto succ = successors(m, b, 1);
  REQUIRE(succ.size() == 3);
  for (int o = 0; o < 3; ++o) {
    CHECK(succ[o].prob == doctest::Approx(observation_prob(m, b, 1, o)));
    CHECK(succ[o].belief.l1_distance(belief_update(m, b, 1, o)) < 1e-12);
  }
}

TEST_CASE("expected reward and cost") {
  auto m = fixtures::single_state(3.0, 2.0, 0.5);
  CHECK(expected_reward(m, m.initial_belief(), 0) == 3.0);
  CHECK(expected_cost(m, m.initial_belief(), 0) == 2.0);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto rm = fixtures::random_model(rng, 3, 2, 2, 0.9);
    CHECK(expected_cost(rm, fixtures::random_belief(rng, 3), i % 2) >= 0.0);
  }
}

TEST_CASE("cumulative cost W") {
  auto m = fixtures::single_state(0.0, 1.0, 0.9);
  CHECK(cumulative_cost(m, m.initial_belief(), {}) == 0.0);
  CHECK(cumulative_cost(m, m.initial_belief(), {{0, 0}, {0, 0}}) == doctest::Approx(1.9));
}

TEST_CASE("incremental W equals the closed-form sum") {
  std::mt19937_64 rng(5);
  auto m = fixtures::random_model(rng, 4, 3, 2, 0.9);
  std::uniform_int_distribution<int> pick_a(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    Belief b = m.initial_belief();
    History h;
    double incremental = 0.0, discount = 1.0;
    for (int t = 0; t < 8; ++t) {
      int a = pick_a(rng);
      auto succ = successors(m, b, a);
      int o = succ[0].prob > 1e-6 ? 0 : 1;
      incremental += discount * expected_cost(m, b, a);
      discount *= m.gamma();
      h.push_back({a, o});
      b = succ[o].belief;
      CHECK(cumulative_cost(m, m.initial_belief(), h) == doctest::Approx(incremental).epsilon(1e-12));
    }
  }
}

TEST_CASE("d_update") {
  CHECK(d_update(5.0, 5.0, 0.9) == 0.0);
  CHECK(d_update(1.0, 0.5, 0.5) == 1.0);
}

TEST_CASE("builder validation") {
  ModelBuilder mb(2, 1, 1);
  mb.add_transition(0, 0, 0, 0.9).add_transition(1, 0, 1, 1.0);
  mb.set_observation(0, 0, 0, 1.0).set_observation(1, 0, 0, 1.0);
  CHECK_THROWS_AS(std::move(mb.initial_belief({1, 0})).build(), StochasticityError);

  ModelBuilder neg(1, 1, 1);
  neg.add_transition(0, 0, 0, 1.0).set_observation(0, 0, 0, 1.0).set_cost(0, 0, -1.0);
  CHECK_THROWS_AS(std::move(neg.initial_belief({1})).build(), InvalidModel);

  ModelBuilder g(1, 1, 1);
  g.add_transition(0, 0, 0, 1.0).set_observation(0, 0, 0, 1.0).gamma(1.0);
  CHECK_THROWS_AS(std::move(g.initial_belief({1})).build(), InvalidModel);
}

TEST_CASE("terminal detection") {
  ModelBuilder mb(2, 1, 1);
  mb.add_transition(0, 0, 1, 1.0).add_transition(1, 0, 1, 1.0).set_reward(0, 0, 1.0);
  mb.set_observation(0, 0, 0, 1.0).set_observation(1, 0, 0, 1.0);
  auto m = std::move(mb.initial_belief({1, 0})).build();
  CHECK_FALSE(m.is_terminal(0));
  CHECK(m.is_terminal(1));
}

TEST_CASE("model JSON round trip is bit exact") {
  std::mt19937_64 rng(17);
  auto m = fixtures::random_model(rng, 4, 2, 3, 0.95);
  auto path = temp_file("roundtrip.json");
  save_model(m, path);
  auto back = load_model(path);
  CHECK(model_to_json(back) == model_to_json(m));
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 2; ++a) {
      CHECK(back.reward(s, a) == m.reward(s, a));
      for (int sp = 0; sp < 4; ++sp) CHECK(back.transition(s, a, sp) == m.transition(s, a, sp));
    }
  std::filesystem::remove(path);
}

TEST_CASE("schema errors name the field") {
  auto m = fixtures::two_state_sensor();
  auto j = model_to_json(m);

  auto missing = j;
  missing.erase("gamma");
  try {
    model_from_json(missing);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.gamma");
  }

  auto ragged = j;
  ragged["T"][1][0] = nlohmann::json::array({1.0});
  try {
    model_from_json(ragged);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.T[1][0]");
  }

  auto bad_row = j;
  bad_row["T"][0][0] = nlohmann::json::array({0.5, 0.4});
  CHECK_THROWS_AS(model_from_json(bad_row), StochasticityError);
}

TEST_CASE("unparseable file is a schema error") {
  auto path = temp_file("garbage.json");
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_model(path), SchemaError);
  std::filesystem::remove(path);
}
