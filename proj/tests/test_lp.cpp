#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rcpomdp/lp.hpp"

using namespace rcpomdp;

TEST_CASE("single variable upper bound") {
  LinearProgram lp{{1.0}, {{{1.0}, Sense::le, 3.0}}};
  auto sol = lp_solve(lp);
  CHECK(sol.optimum == doctest::Approx(3.0));
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("simplex budget") {
  LinearProgram lp{{1.0, 1.0}, {{{1.0, 1.0}, Sense::le, 1.0}}};
  CHECK(lp_solve(lp).optimum == doctest::Approx(1.0));
}

TEST_CASE("equality and >= rows") {
  // max 2x + y  s.t. x + y = 4, x >= 1, x <= 3
  LinearProgram lp{{2.0, 1.0},
                   {{{1.0, 1.0}, Sense::eq, 4.0}, {{1.0, 0.0}, Sense::ge, 1.0}, {{1.0, 0.0}, Sense::le, 3.0}}};
  auto sol = lp_solve(lp);
  CHECK(sol.optimum == doctest::Approx(7.0));
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("negative right-hand side") {
  // max -x s.t. -x <= -2  (x >= 2)
  LinearProgram lp{{-1.0}, {{{-1.0}, Sense::le, -2.0}}};
  auto sol = lp_solve(lp);
  CHECK(sol.optimum == doctest::Approx(-2.0));
  CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram inf{{1.0}, {{{1.0}, Sense::le, 1.0}, {{1.0}, Sense::ge, 2.0}}};
  CHECK_THROWS_AS(lp_solve(inf), LpInfeasible);
  LinearProgram unb{{1.0, 0.0}, {{{0.0, 1.0}, Sense::le, 1.0}}};
  CHECK_THROWS_AS(lp_solve(unb), LpUnbounded);
}

TEST_CASE("mixture master LP duals") {
  // Columns (reward, cost): (12, 5), (10, 5), (0, 0); budget 4.
  LinearProgram lp{{12.0, 10.0, 0.0}, {{{5.0, 5.0, 0.0}, Sense::le, 4.0}, {{1.0, 1.0, 1.0}, Sense::eq, 1.0}}};
  auto sol = lp_solve(lp);
  CHECK(sol.optimum == doctest::Approx(12.0 * 0.8));
  CHECK(sol.duals[0] == doctest::Approx(12.0 / 5.0));
  CHECK(sol.duals[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degenerate LP terminates") {
  // Classic cycling example for the largest-coefficient rule.
  LinearProgram lp{{0.75, -150.0, 0.02, -6.0},
                   {{{0.25, -60.0, -0.04, 9.0}, Sense::le, 0.0},
                    {{0.5, -90.0, -0.02, 3.0}, Sense::le, 0.0},
                    {{0.0, 0.0, 1.0, 0.0}, Sense::le, 1.0}}};
  CHECK(lp_solve(lp).optimum == doctest::Approx(0.05));
}

TEST_CASE("random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 5, m = 4;
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(2.0 * u(rng) - 0.5);
    for (std::size_t i = 0; i < m; ++i) {
      LinearConstraint c;
      for (std::size_t j = 0; j < n; ++j) c.coeffs.push_back(u(rng) + 0.05);
      c.sense = Sense::le;
      c.rhs = 1.0 + 4.0 * u(rng);
      lp.constraints.push_back(c);
    }
    if (trial % 3 == 0) {
      LinearConstraint c;
      for (std::size_t j = 0; j < n; ++j) c.coeffs.push_back(u(rng));
      c.sense = Sense::ge;
      c.rhs = 0.2 * u(rng);
      lp.constraints.push_back(c);
    }
    if (trial % 5 == 0) {
      LinearConstraint c;
      for (std::size_t j = 0; j < n; ++j) c.coeffs.push_back(u(rng) + 0.1);
      c.sense = Sense::eq;
      c.rhs = 0.5;
      lp.constraints.push_back(c);
    }
    auto ref = oracle::lp_by_vertices(lp);
    REQUIRE(ref.has_value());
    auto sol = lp_solve(lp);
    CHECK(sol.optimum == doctest::Approx(*ref).epsilon(1e-7));
    // Witness must be feasible.
    for (const auto& c : lp.constraints) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += c.coeffs[j] * sol.x[j];
      if (c.sense == Sense::le) CHECK(lhs <= c.rhs + 1e-9);
      if (c.sense == Sense::ge) CHECK(lhs >= c.rhs - 1e-9);
      if (c.sense == Sense::eq) CHECK(lhs == doctest::Approx(c.rhs));
    }
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("duals match finite differences") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    LinearProgram lp;
    for (int j = 0; j < 4; ++j) lp.objective.push_back(u(rng));
    for (int i = 0; i < 3; ++i) {
      LinearConstraint c;
      for (int j = 0; j < 4; ++j) c.coeffs.push_back(u(rng) + 0.1);
      c.rhs = 1.0 + u(rng);
      lp.constraints.push_back(c);
    }
    auto base = lp_solve(lp);
    for (int i = 0; i < 3; ++i) {
      auto bumped = lp;
      bumped.constraints[i].rhs += 1e-6;
      double fd = (lp_solve(bumped).optimum - base.optimum) / 1e-6;
      CHECK(base.duals[i] == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}
