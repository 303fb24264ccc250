#pragma once

#include <random>
#include <vector>

#include "rcpomdp/model.hpp"

namespace fixtures {

using rcpomdp::Model;
using rcpomdp::ModelBuilder;

/// Two states, identity transitions, one "look" action whose observation
/// names the state with the given accuracy.
inline Model two_state_sensor(double accuracy = 0.8) {
  ModelBuilder b(2, 1, 2);
  for (int s = 0; s < 2; ++s) {
    b.add_transition(s, 0, s, 1.0);
    b.set_observation(s, 0, s, accuracy).set_observation(s, 0, 1 - s, 1.0 - accuracy);
  }
  return std::move(b.gamma(0.9).initial_belief({0.5, 0.5})).build();
}

/// One state, one action, constant reward r and cost c.
inline Model single_state(double r, double c, double gamma) {
  ModelBuilder b(1, 1, 1);
  b.add_transition(0, 0, 0, 1.0).set_observation(0, 0, 0, 1.0).set_reward(0, 0, r).set_cost(0, 0, c);
  return std::move(b.gamma(gamma).initial_belief({1.0})).build();
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) sum += (x = e(rng));
  for (auto& x : p) x /= sum;
  return p;
}

inline rcpomdp::Belief random_belief(std::mt19937_64& rng, std::size_t n) {
  return rcpomdp::Belief::normalized(random_simplex(rng, n));
}

/// Random dense model with the given sizes; rewards in [-1, 1], costs in [0, 1].
inline Model random_model(std::mt19937_64& rng, std::size_t ns, std::size_t na, std::size_t no, double gamma) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelBuilder b(ns, na, no);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t a = 0; a < na; ++a) {
      auto row = random_simplex(rng, ns);
      for (std::size_t sp = 0; sp < ns; ++sp) b.add_transition(int(s), int(a), int(sp), row[sp]);
      b.set_reward(int(s), int(a), 2.0 * u(rng) - 1.0).set_cost(int(s), int(a), u(rng));
    }
  for (std::size_t sp = 0; sp < ns; ++sp)
    for (std::size_t a = 0; a < na; ++a) {
      auto row = random_simplex(rng, no);
      for (std::size_t o = 0; o < no; ++o) b.set_observation(int(sp), int(a), int(o), row[o]);
    }
  return std::move(b.gamma(gamma).initial_belief(random_simplex(rng, ns))).build();
}

}  // namespace fixtures
