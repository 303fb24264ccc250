#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcpomdp/bounds.hpp"
#include "rcpomdp/envs.hpp"
#include "rcpomdp/model.hpp"
#include "rcpomdp/parallel.hpp"

namespace rcpomdp {

/// Admissible horizon: a step count, or kInfinity.
using Horizon = std::int64_t;
inline constexpr Horizon kInfinity = std::numeric_limits<Horizon>::max();

/// Largest k such that k worst-case steps of cost c_max keep d >= 0.
/// Infinite when c_max / (1 - gamma) <= d or c_max == 0; zero when d < 0.
Horizon admissible_horizon(double d, double c_max, double gamma);

std::string horizon_to_string(Horizon k);
nlohmann::json horizon_to_json(Horizon k);
/// Accepts a nonnegative integer or the string "inf".
Horizon horizon_from_json(const nlohmann::json& j);

/// Bounds of a child, either a tree node or a virtual leaf.
struct ChildValue {
  double r_hi = 0.0;
  double r_lo = 0.0;
  double c_hi = 0.0;
  double c_lo = 0.0;
  Horizon k = 0;
};

struct ActionRecord {
  double reward = 0.0;  // R(b, a)
  double cost = 0.0;    // C(b, a)
  double q_r_hi = 0.0;
  double q_r_lo = 0.0;
  double q_c_hi = 0.0;
  double q_c_lo = 0.0;
  Horizon k = 0;
  bool pruned = false;
  std::vector<double> obs_prob;
  /// Values of unexpanded children, from the initial bounds and Γ_cmin.
  std::vector<ChildValue> leaf;
};

struct TreeNode {
  int id = 0;
  int parent = -1;
  int parent_action = -1;
  int parent_observation = -1;
  int depth = 0;
  Belief b;
  double d = 0.0;
  Horizon k = 0;
  double v_r_hi = 0.0;
  double v_r_lo = 0.0;
  double v_c_hi = 0.0;
  double v_c_lo = 0.0;
  /// Action the policy executes here.
  int action = 0;
  bool pruned = false;
  bool dead_end = false;
  /// Per-action bookkeeping; empty for trees loaded from disk.
  std::vector<ActionRecord> actions;
  /// Child node id per (action, observation), -1 when unexpanded.
  std::vector<int> children;

  int child(int a, int o, std::size_t num_observations) const {
    return children[static_cast<std::size_t>(a) * num_observations + o];
  }
};

/// The policy produced by ARCS: a tree of (belief, admissible cost) nodes
/// plus the minimum-cost alpha pairs used off the tree.
class PolicyTree {
 public:
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(int id) const { return nodes_[id]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_observations() const { return num_observations_; }
  const AlphaPairSet& gamma_cmin() const { return gamma_cmin_; }
  double c_max() const { return c_max_; }

  /// Node matching b within L1 1e-6 and d within 1e-6, or -1.
  int find(const Belief& b, double d) const;

  nlohmann::json to_json() const;
  /// Throws SchemaError.
  static PolicyTree from_json(const nlohmann::json& j);

 private:
  friend class ArcsSolver;
  std::vector<TreeNode> nodes_;
  std::size_t num_actions_ = 0;
  std::size_t num_observations_ = 0;
  AlphaPairSet gamma_cmin_;
  double c_max_ = 0.0;
};

/// Greedy minimum-cost action over Γ_cmin (higher reward on ties).
int min_cost_action(const AlphaPairSet& gamma_cmin, const Belief& b);

/// Action for (b, d): the matching tree node's action, or the min-cost
/// fallback off the tree or at dead ends.
int execute_action(const PolicyTree& tree, const Belief& b, double d);

struct ArcsOptions {
  Horizon k_target = kInfinity;
  double epsilon = 0.01;
  double time_budget = 60.0;  // seconds, including the min-cost solve
  double min_cost_fraction = 0.1;
  double kappa = 0.5;
  double heuristic_probability = 0.5;
  double beta = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  long long max_iterations = std::numeric_limits<long long>::max();
  /// Stops growing the tree here; about 1 KB per node on small models.
  std::size_t max_nodes = 1'000'000;
  int max_depth = 1000;
  Exec exec = Exec::serial;
};

struct IterationRecord {
  long long iteration = 0;
  double v_r_lo = 0.0;
  double v_r_hi = 0.0;
  Horizon k = 0;
  std::size_t nodes = 0;
};

struct ArcsResult {
  PolicyTree tree;
  Horizon certified_k = 0;
  long long iterations = 0;
  double seconds = 0.0;
  bool converged = false;
  std::vector<IterationRecord> history;
};

struct SampleResult {
  std::vector<int> path;
  bool created = false;
  bool dead_end = false;
};

/// Step-by-step access to the solve loop; solve_arcs drives it.
class ArcsSolver {
 public:
  ArcsSolver(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin);
  ArcsSolver(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin, BoundSet bounds);

  SampleResult sample();
  /// Recomputes one node's action records and values from its children.
  void backup(int id);
  /// Backs up id and every ancestor up to the root.
  void backup_to_root(int id);
  /// Applies the pruning rules to the given nodes and their ancestors.
  void prune(const std::vector<int>& touched);

  /// One SAMPLE, BACKUP, PRUNE round.
  void iterate();
  bool done() const;

  const PolicyTree& tree() const { return tree_; }
  PolicyTree release() { return std::move(tree_); }
  const Model& model() const { return m_; }

 private:
  int add_node(int parent, int a, int o, Belief b, double d);
  void init_actions(TreeNode& node);
  ChildValue value_of(const TreeNode& node, int a, int o) const;
  bool cost_ok(double value, double d) const;
  void sample_heuristic(SampleResult& out, double eps);
  void sample_random(SampleResult& out);
  int step_into(SampleResult& out, int id, int a, int o);
  bool prune_node(int id);

  const Model& m_;
  ArcsOptions opts_;
  BoundSet bounds_;
  PolicyTree tree_;
  std::mt19937_64 rng_;
};

/// Runs ARCS: computes Γ_cmin with a share of the budget, then loops
/// SAMPLE/BACKUP/PRUNE until the target is met or time runs out.
ArcsResult solve_arcs(const Model& m, const ArcsOptions& opts);

/// Same, with a precomputed Γ_cmin (all of the budget goes to search).
ArcsResult solve_arcs(const Model& m, const ArcsOptions& opts, AlphaPairSet gamma_cmin);

}  // namespace rcpomdp
