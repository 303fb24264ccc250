#pragma once

#include <cstddef>
#include <vector>

#include "rcpomdp/bounds.hpp"
#include "rcpomdp/model.hpp"
#include "rcpomdp/parallel.hpp"

namespace rcpomdp {

/// Scalar objective wr * V_R - wc * V_C over alpha pairs.
struct Scalarization {
  double wr = 1.0;
  double wc = 0.0;
};

inline constexpr Scalarization kMinCost{0.0, 1.0};

double scalar_value(const AlphaPair& p, const Belief& b, Scalarization w);

/// Pair maximizing the scalar value at b. Ties within 1e-9 prefer higher
/// reward when wr == 0 and lower cost otherwise, then the lowest index.
/// Throws EmptySet.
std::size_t best_pair(const AlphaPairSet& set, const Belief& b, Scalarization w);

struct PointBasedOptions {
  Scalarization weights;
  double time_budget = 1.0;  // seconds
  std::size_t max_beliefs = 2000;
  int breadth_depth = 2;
  int max_rounds = 1000;
  /// A backup is kept only if it beats the current value by more than this
  /// (or ties it and wins the tie-break).
  double improvement_tolerance = 1e-6;
  Exec exec = Exec::serial;
  IterationOptions bound_options;
};

struct PointBasedResult {
  AlphaPairSet alphas;
  std::vector<Belief> beliefs;
  int rounds = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Anytime point-based value iteration over alpha pairs. Every pair is the
/// exact value of a conditional plan (up to the blind-seed margin), so the
/// greedy policy's scalar value at any belief is at least the set's value.
/// Alphas are only ever added.
PointBasedResult solve_point_based(const Model& m, const PointBasedOptions& opts);

/// One sweep of backups for the given beliefs against a frozen set; returns
/// one candidate per belief. Serial and parallel agree bit for bit.
AlphaPairSet backup_beliefs(const Model& m, const AlphaPairSet& set, const std::vector<Belief>& beliefs,
                            Scalarization w, Exec exec);

/// Minimum expected cumulative cost policy (reward -C) with reward as a
/// tie-break.
AlphaPairSet solve_min_cost_policy(const Model& m, double time_budget, Exec exec = Exec::serial);

}  // namespace rcpomdp
