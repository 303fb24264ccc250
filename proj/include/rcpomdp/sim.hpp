#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "rcpomdp/envs.hpp"
#include "rcpomdp/model.hpp"
#include "rcpomdp/parallel.hpp"
#include "rcpomdp/policy.hpp"

namespace rcpomdp {

/// d below this counts as a violation; absorbs rounding at exact-budget policies.
inline constexpr double kViolationTolerance = -1e-9;

struct TrajectoryStep {
  int step = 0;
  int state = 0;
  std::uint64_t belief_digest = 0;
  int action = 0;
  int observation = 0;
  /// Admissible cost after the step.
  double d = 0.0;
};

struct RunMetrics {
  double discounted_reward = 0.0;
  /// Realized discounted cost Σ γ^t C(s_t, a_t).
  double discounted_cost = 0.0;
  /// W(h): discounted expected cost along the beliefs.
  double belief_cost = 0.0;
  double min_d = 0.0;
  bool violated = false;
  int steps = 0;
  History history;
  std::vector<TrajectoryStep> trajectory;
};

struct AggregateMetrics {
  long long trials = 0;
  double mean_reward = 0.0;
  double sem_reward = 0.0;
  double mean_cost = 0.0;
  double sem_cost = 0.0;
  double violation_rate = 0.0;
};

/// Hash of the belief rounded to 1e-9.
std::uint64_t belief_digest(const Belief& b);

/// Generator for one trial, derived from (seed, trial) only.
std::mt19937_64 trial_rng(std::uint64_t seed, long long trial);

/// One episode from s0 ~ b0 until the horizon or a terminal state.
RunMetrics rollout(const Model& m, Policy& policy, int horizon, std::mt19937_64& rng, bool record = false);

struct EvalOptions {
  long long trials = 1000;
  int horizon = 20;
  std::uint64_t seed = kDefaultSeed;
  Exec exec = Exec::parallel;
  bool record_trajectories = false;
};

struct Evaluation {
  AggregateMetrics aggregate;
  std::vector<RunMetrics> runs;
};

/// Independent rollouts of clones of `policy`. Results depend only on the
/// options, never on thread count or scheduling.
Evaluation evaluate(const Model& m, const Policy& policy, const EvalOptions& opts);

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs);

/// trial,reward,cost,violated,steps
void write_runs_csv(std::ostream& os, const std::vector<RunMetrics>& runs);
/// trial,step,state,action,observation,d
void write_trajectory_csv(std::ostream& os, const std::vector<RunMetrics>& runs);
nlohmann::json aggregate_to_json(const AggregateMetrics& a);

}  // namespace rcpomdp
