#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <json.hpp>

#include "rcpomdp/envs.hpp"
#include "rcpomdp/model.hpp"
#include "rcpomdp/parallel.hpp"
#include "rcpomdp/point_based.hpp"
#include "rcpomdp/policy.hpp"

namespace rcpomdp {

struct ColumnValue {
  double value_r = 0.0;
  double value_c = 0.0;
  /// Bounds on what the truncated expansion leaves out.
  double tail_r = 0.0;
  double tail_c = 0.0;
  /// False when the expansion grew too wide and Monte Carlo was used.
  bool exact = true;
};

struct ColumnEvalOptions {
  int depth = 20;
  /// Distinct beliefs allowed in one layer before falling back to rollouts.
  std::size_t max_layer = 20000;
  long long rollouts = 1000;
  std::uint64_t seed = kDefaultSeed;
};

/// Discounted (reward, cost) at b0 of acting greedily on `alphas` under `w`,
/// by expanding the reachable belief tree to the given depth and merging
/// equal beliefs.
ColumnValue evaluate_policy_columns(const Model& m, const AlphaPairSet& alphas, Scalarization w,
                                    const ColumnEvalOptions& opts = {});

/// A deterministic policy and its value at b0.
struct PolicyColumn {
  std::shared_ptr<const AlphaPairSet> alphas;
  Scalarization weights;
  double value_r = 0.0;
  double value_c = 0.0;
  double lambda = 0.0;
};

struct MixedPolicy {
  std::vector<PolicyColumn> columns;
  std::vector<double> weights;

  double value_r() const;
  double value_c() const;
  nlohmann::json to_json() const;
  /// Throws SchemaError.
  static MixedPolicy from_json(const nlohmann::json& j, std::size_t num_states);
};

struct CgcpOptions {
  double time_budget = 300.0;
  int max_iterations = 100;
  /// Point-based budget per subproblem, raised when λ stalls.
  double subproblem_budget = 20.0;
  double budget_increment = 100.0;
  double stall_threshold = 1e-6;
  double tolerance = 1e-6;
  ColumnEvalOptions eval;
  Exec exec = Exec::serial;
};

struct CgcpResult {
  MixedPolicy policy;
  /// Master LP optimum and cost dual after each iteration.
  std::vector<double> objectives;
  std::vector<double> lambdas;
  int iterations = 0;
  /// False when no mixture meets the budget; the min-cost column is returned.
  bool feasible = true;
  double seconds = 0.0;
};

/// Lagrangian column generation for the C-POMDP: the budget holds in
/// expectation at b0 only.
CgcpResult solve_cgcp(const Model& m, const CgcpOptions& opts = {});

/// Samples one column per trial at reset and follows it.
class MixedExecutor : public Policy {
 public:
  explicit MixedExecutor(std::shared_ptr<const MixedPolicy> mix);
  std::unique_ptr<Policy> clone() const override { return std::make_unique<MixedExecutor>(*this); }
  void reset(std::mt19937_64& rng) override;
  int act(const Belief& b, double d, std::mt19937_64& rng) override;
  nlohmann::json to_json() const override;

  int column() const { return column_; }

 private:
  std::shared_ptr<const MixedPolicy> mix_;
  int column_ = 0;
};

/// Re-solves column generation from (b, max(d, 0)) at every step and samples
/// an action from the mixture's first step. Negative d falls back to the
/// min-cost policy. Solutions are cached per (belief, d) and shared by clones.
class ClosedLoopPolicy : public Policy {
 public:
  ClosedLoopPolicy(std::shared_ptr<const Model> m, CgcpOptions per_step,
                   std::shared_ptr<const AlphaPairSet> gamma_cmin);
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ClosedLoopPolicy>(*this); }
  int act(const Belief& b, double d, std::mt19937_64& rng) override;
  nlohmann::json to_json() const override;

  /// First-step action distribution at (b, d).
  std::vector<double> action_distribution(const Belief& b, double d) const;

 private:
  std::shared_ptr<const MixedPolicy> solve_at(const Belief& b, double d) const;

  struct Cache {
    std::mutex mu;
    std::map<std::vector<long long>, std::shared_ptr<const MixedPolicy>> entries;
  };

  std::shared_ptr<const Model> m_;
  CgcpOptions per_step_;
  std::shared_ptr<const AlphaPairSet> gamma_cmin_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace rcpomdp
