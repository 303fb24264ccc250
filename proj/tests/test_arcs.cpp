#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rcpomdp/arcs.hpp"
#include "rcpomdp/envs.hpp"
#include "rcpomdp/io.hpp"
#include "rcpomdp/point_based.hpp"

using namespace rcpomdp;

namespace {

ArcsOptions quick(double budget) {
  ArcsOptions o;
  o.time_budget = budget;
  return o;
}

History history_of(const PolicyTree& tree, int id) {
  History h;
  for (int cur = id; tree.node(cur).parent >= 0; cur = tree.node(cur).parent)
    h.insert(h.begin(), Step{tree.node(cur).parent_action, tree.node(cur).parent_observation});
  return h;
}

}  // namespace

TEST_CASE("admissible horizon examples") {
  CHECK(admissible_horizon(5.0, 1.0, 0.9) == 6);
  CHECK(admissible_horizon(5.0, 0.5, 0.9) == kInfinity);
  CHECK(admissible_horizon(-0.1, 1.0, 0.9) == 0);
  CHECK(admissible_horizon(0.0, 0.0, 0.9) == kInfinity);
  CHECK(admissible_horizon(0.0, 1.0, 0.9) == 0);
  CHECK(horizon_to_string(kInfinity) == "inf");
  CHECK(horizon_from_json(horizon_to_json(7)) == 7);
  CHECK(horizon_from_json(horizon_to_json(kInfinity)) == kInfinity);
  CHECK_THROWS_AS(horizon_from_json(nlohmann::json(-1)), SchemaError);
}

TEST_CASE("admissible horizon matches step counting") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ug(0.5, 0.99), ud(0.0, 50.0), uc(0.01, 5.0);
  for (int i = 0; i < 1000; ++i) {
    double g = ug(rng), d = ud(rng), c = uc(rng);
    Horizon k = admissible_horizon(d, c, g);
    if (c / (1 - g) <= d) {
      CHECK(k == kInfinity);
    } else {
      CHECK(k == oracle::steps_until_negative(d, c, g, 100'000'000));
    }
  }
}

TEST_CASE("CE solves to the budget-exhausting action") {
  auto m = make_ce();
  auto res = solve_arcs(m, quick(10.0));
  CHECK(res.converged);
  const auto& root = res.tree.root();
  CHECK(root.action == 1);
  CHECK(root.v_r_lo == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(root.v_r_hi - root.v_r_lo <= 0.01);
  CHECK(res.certified_k == kInfinity);
}

TEST_CASE("finite target stops once certified") {
  auto m = make_ctiger(3.0);
  ArcsOptions o = quick(20.0);
  o.k_target = 1;
  auto res = solve_arcs(m, o);
  CHECK(res.converged);
  CHECK(res.certified_k >= 1);
}

TEST_CASE("zero-cost model is certified for every horizon at once") {
  std::mt19937_64 rng(3);
  auto j = model_to_json(fixtures::random_model(rng, 3, 2, 2, 0.9));
  for (auto& row : j["C"])
    for (auto& x : row) x = 0.0;
  auto m = model_from_json(j);
  ArcsSolver solver(m, quick(1.0), solve_min_cost_policy(m, 0.5));
  CHECK(solver.tree().c_max() == 0.0);
  CHECK(solver.tree().root().k == kInfinity);
}

TEST_CASE("node budgets follow the closed form and bounds stay ordered") {
  for (auto m : {make_ctiger(3.0), make_ce(), make_tunnels()}) {
    ArcsOptions o = quick(3.0);
    o.max_iterations = 300;
    auto res = solve_arcs(m, o);
    const auto& tree = res.tree;
    for (const auto& n : tree.nodes()) {
      const History h = history_of(tree, n.id);
      const double w = cumulative_cost(m, m.initial_belief(), h);
      const double closed = std::pow(m.gamma(), -static_cast<double>(h.size())) * (m.cost_budget() - w);
      CHECK(n.d == doctest::Approx(closed).epsilon(1e-9).scale(1.0));
      CHECK(n.v_r_lo <= n.v_r_hi + 1e-9);
      CHECK(n.v_c_lo <= n.v_c_hi + 1e-9);
      CHECK(n.depth == static_cast<int>(h.size()));
    }
  }
}

TEST_CASE("root lower bound never decreases on CE and C-Tiger") {
  for (auto m : {make_ce(), make_ctiger(3.0)}) {
    ArcsOptions o = quick(3.0);
    o.max_iterations = 500;
    auto res = solve_arcs(m, o);
    REQUIRE(res.history.size() >= 2);
    CHECK(res.history.front().iteration == 0);
    CHECK(res.history.back().iteration == res.iterations);
    for (std::size_t i = 1; i < res.history.size(); ++i) CHECK(res.history[i].v_r_lo >= res.history[i - 1].v_r_lo - 1e-6);
  }
}

TEST_CASE("constrained value does not exceed the unconstrained optimum") {
  auto m = make_ctiger(3.0);
  ArcsOptions o = quick(5.0);
  o.max_iterations = 2000;
  auto res = solve_arcs(m, o);
  auto exact = oracle::optimal_reward(m, m.initial_belief(), 6);
  CHECK(res.tree.root().v_r_lo <= exact.hi + 1e-6);
}

TEST_CASE("actions whose cost lower bound exceeds the budget are pruned") {
  auto m = make_ctiger(0.5);
  ArcsSolver solver(m, quick(1.0), solve_min_cost_policy(m, 0.5));
  solver.iterate();
  const auto& root = solver.tree().root();
  CHECK(root.actions[0].pruned);
  CHECK(root.action != 0);
  CHECK(root.k == kInfinity);
}

TEST_CASE("infeasible root is a dead end and falls back to minimum cost") {
  auto j = model_to_json(fixtures::single_state(1.0, 1.0, 0.9));
  j["c_hat"] = 0.5;
  auto m = model_from_json(j);
  ArcsSolver solver(m, quick(1.0), solve_min_cost_policy(m, 0.5));
  solver.iterate();
  CHECK(solver.tree().root().pruned);
  CHECK(solver.done());
  CHECK(solver.tree().root().k == 0);
  auto res = solve_arcs(m, quick(1.0));
  CHECK_FALSE(res.converged);
  CHECK(execute_action(res.tree, m.initial_belief(), m.cost_budget()) == 0);
}

TEST_CASE("dominated actions are pruned") {
  // One state. Action 0 spends more of the budget for less reward, so it
  // certifies a shorter horizon than action 1.
  ModelBuilder b(1, 2, 1);
  b.add_transition(0, 0, 0, 1.0).add_transition(0, 1, 0, 1.0);
  b.set_observation(0, 0, 0, 1.0).set_observation(0, 1, 0, 1.0);
  b.set_cost(0, 0, 0.6).set_reward(0, 1, 1.0).set_cost(0, 1, 0.4);
  auto m = std::move(b.gamma(0.5).cost_budget(1.05).initial_belief({1.0})).build();
  ArcsOptions o = quick(1.0);
  o.k_target = 3;
  ArcsSolver solver(m, o, solve_min_cost_policy(m, 0.5));
  const auto& root = solver.tree().root();
  REQUIRE(root.actions[1].k == 3);
  REQUIRE(root.actions[0].k == 2);
  CHECK_FALSE(root.actions[0].pruned);
  solver.prune({0});
  CHECK(root.actions[0].pruned);
  CHECK_FALSE(root.actions[1].pruned);
  CHECK(root.action == 1);
}

TEST_CASE("execution follows the tree and falls back off it") {
  auto m = make_ce();
  auto res = solve_arcs(m, quick(5.0));
  CHECK(execute_action(res.tree, m.initial_belief(), m.cost_budget()) == 1);
  Belief off({0.0, 0.0, 0.5, 0.5, 0.0});
  CHECK(res.tree.find(off, 1.0) == -1);
  CHECK(execute_action(res.tree, off, 1.0) == min_cost_action(res.tree.gamma_cmin(), off));
}

TEST_CASE("policy tree JSON round trip") {
  auto m = make_ctiger(3.0);
  ArcsOptions o = quick(2.0);
  o.max_iterations = 50;
  auto res = solve_arcs(m, o);
  auto j = res.tree.to_json();
  auto back = PolicyTree::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.size() == res.tree.size());

  auto bad = j;
  bad["nodes"][0]["k"] = "forever";
  CHECK_THROWS_AS(PolicyTree::from_json(bad), SchemaError);
  bad = j;
  bad["nodes"][0].erase("belief");
  CHECK_THROWS_AS(PolicyTree::from_json(bad), SchemaError);
}

TEST_CASE("fixed seed reproduces the tree") {
  auto m = make_ctiger(3.0);
  ArcsOptions o = quick(100.0);
  o.max_iterations = 200;
  auto gamma = solve_min_cost_policy(m, 0.5);
  auto a = solve_arcs(m, o, gamma);
  auto b = solve_arcs(m, o, gamma);
  CHECK(a.tree.to_json() == b.tree.to_json());
}
