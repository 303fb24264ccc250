#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rcpomdp/bounds.hpp"
#include "rcpomdp/io.hpp"

using namespace rcpomdp;

TEST_CASE("alpha_eval") {
  AlphaSet one{{0, {1.0, 0.0}}};
  CHECK(alpha_eval(one, Belief({0.5, 0.5}), EvalMode::max) == doctest::Approx(0.5));
  AlphaSet two{{0, {1.0, 0.0}}, {1, {0.0, 1.0}}};
  Belief b({0.3, 0.7});
  CHECK(alpha_eval(two, b, EvalMode::max) == doctest::Approx(0.7));
  CHECK(alpha_eval(two, b, EvalMode::min) == doctest::Approx(0.3));
  CHECK_THROWS_AS(alpha_eval(AlphaSet{}, b, EvalMode::max), EmptySet);
}

TEST_CASE("geometric series on a single state") {
  auto m = fixtures::single_state(1.0, 1.0, 0.5);
  auto fib = fib_bound(m, Objective::reward);
  CHECK(fib[0].values[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(fib[0].values[0] >= 2.0);
  auto blind = blind_lower_bound(m, Objective::reward);
  CHECK(blind[0].values[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(blind[0].values[0] <= 2.0);
  auto fibc = fib_bound(m, Objective::cost);
  CHECK(fibc[0].values[0] <= 2.0);
  CHECK(fibc[0].values[0] == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("zero cost table gives zero cost bounds") {
  std::mt19937_64 rng(1);
  auto base = fixtures::random_model(rng, 3, 2, 2, 0.9);
  auto j = model_to_json(base);
  for (auto& row : j["C"])
    for (auto& x : row) x = 0.0;
  auto m = model_from_json(j);
  for (const auto& a : fib_bound(m, Objective::cost))
    for (double x : a.values) CHECK(x == 0.0);
}

TEST_CASE("FIB equals MDP value iteration when fully observable") {
  // Two states, two actions, observation reveals the successor state.
  ModelBuilder mb(2, 2, 2);
  mb.add_transition(0, 0, 0, 0.7).add_transition(0, 0, 1, 0.3);
  mb.add_transition(0, 1, 1, 1.0);
  mb.add_transition(1, 0, 0, 0.4).add_transition(1, 0, 1, 0.6);
  mb.add_transition(1, 1, 0, 0.9).add_transition(1, 1, 1, 0.1);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a) mb.set_observation(s, a, s, 1.0);
  mb.set_reward(0, 0, 1.0).set_reward(0, 1, 0.2).set_reward(1, 0, -0.5).set_reward(1, 1, 2.0);
  auto m = std::move(mb.gamma(0.9).initial_belief({0.5, 0.5})).build();

  auto v = oracle::mdp_value_iteration(m);
  auto fib = fib_bound(m, Objective::reward);
  for (int s = 0; s < 2; ++s) {
    double best = std::max(fib[0].values[s], fib[1].values[s]);
    CHECK(best == doctest::Approx(v[s]).epsilon(1e-5));
  }
}

TEST_CASE("bound ordering against exhaustive expectimax") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    auto m = fixtures::random_model(rng, 3, 2, 2, 0.6);
    auto fib = fib_bound(m, Objective::reward);
    auto blind = blind_lower_bound(m, Objective::reward);
    for (int i = 0; i < 5; ++i) {
      auto b = fixtures::random_belief(rng, 3);
      auto exact = oracle::optimal_reward(m, b, 6);
      CHECK(alpha_eval(fib, b, EvalMode::max) >= exact.lo - 1e-9);
      CHECK(alpha_eval(blind, b, EvalMode::max) <= exact.hi + 1e-9);
      CHECK(alpha_eval(blind, b, EvalMode::max) <= alpha_eval(fib, b, EvalMode::max) + 1e-9);
    }
  }
}

TEST_CASE("residuals are non-increasing") {
  std::mt19937_64 rng(31);
  auto m = fixtures::random_model(rng, 4, 3, 2, 0.9);
  for (auto obj : {Objective::reward, Objective::cost}) {
    std::vector<double> fib_res, blind_res;
    IterationOptions o1;
    o1.residuals = &fib_res;
    fib_bound(m, obj, o1);
    IterationOptions o2;
    o2.residuals = &blind_res;
    blind_lower_bound(m, obj, o2);
    for (std::size_t i = 1; i < fib_res.size(); ++i) CHECK(fib_res[i] <= fib_res[i - 1] + 1e-12);
    for (std::size_t i = 1; i < blind_res.size(); ++i) CHECK(blind_res[i] <= blind_res[i - 1] + 1e-12);
  }
}

TEST_CASE("non-convergence is reported") {
  auto m = fixtures::single_state(1.0, 0.0, 0.99);
  IterationOptions o;
  o.max_iterations = 5;
  CHECK_THROWS_AS(fib_bound(m, Objective::reward, o), NonConvergence);
}

TEST_CASE("serial and parallel sweeps are bit identical") {
  std::mt19937_64 rng(37);
  auto m = fixtures::random_model(rng, 20, 4, 3, 0.95);
  IterationOptions s, p;
  p.exec = Exec::parallel;
  for (auto obj : {Objective::reward, Objective::cost}) {
    auto a = fib_bound(m, obj, s), b = fib_bound(m, obj, p);
    auto c = blind_lower_bound(m, obj, s), d = blind_lower_bound(m, obj, p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].values == b[i].values);
      CHECK(c[i].values == d[i].values);
    }
  }
}

TEST_CASE("C_max LP") {
  CHECK(cmax_upper_bound({{0, {0, 0}, {0.0, 0.0}}}) == doctest::Approx(0.0));
  CHECK(cmax_upper_bound({{0, {0, 0}, {2.0, 2.0}}}) == doctest::Approx(2.0));

  AlphaPairSet two{{0, {0, 0}, {1.0, 0.0}}, {1, {0, 0}, {0.0, 1.0}}};
  double grid = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    double p = i * 1e-4;
    grid = std::max(grid, std::min(p, 1.0 - p));
  }
  CHECK(cmax_upper_bound(two) == doctest::Approx(grid).epsilon(1e-6));
  CHECK_THROWS_AS(cmax_upper_bound({}), EmptySet);
}

TEST_CASE("C_max dominates min over alphas at random beliefs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  AlphaPairSet set;
  for (int a = 0; a < 6; ++a) {
    AlphaPair p{a, std::vector<double>(4, 0.0), {}};
    for (int s = 0; s < 4; ++s) p.alpha_c.push_back(u(rng));
    set.push_back(p);
  }
  double cmax = cmax_upper_bound(set);
  auto costs = cost_part(set);
  for (int i = 0; i < 1000; ++i)
    CHECK(alpha_eval(costs, fixtures::random_belief(rng, 4), EvalMode::min) <= cmax + 1e-9);
}

TEST_CASE("alpha pair JSON round trip") {
  AlphaPairSet set{{1, {0.5, -1.0}, {0.0, 2.0}}};
  auto back = alpha_pairs_from_json(alpha_pairs_to_json(set), 2);
  REQUIRE(back.size() == 1);
  CHECK(back[0].action == 1);
  CHECK(back[0].alpha_r == set[0].alpha_r);
  CHECK(back[0].alpha_c == set[0].alpha_c);
  CHECK_THROWS_AS(alpha_pairs_from_json(nlohmann::json::object(), 2), SchemaError);
}
