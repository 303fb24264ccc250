#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "rcpomdp/model.hpp"
#include "rcpomdp/parallel.hpp"

namespace rcpomdp {

class EmptySet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlphaVector {
  int action = 0;
  std::vector<double> values;
};
using AlphaSet = std::vector<AlphaVector>;

enum class EvalMode { max, min };
enum class Objective { reward, cost };

double dot(std::span<const double> alpha, const Belief& b);

/// Nonzero entries of b in ascending state order, for repeated dot products.
struct SparseBelief {
  std::vector<std::size_t> states;
  std::vector<double> probs;
  explicit SparseBelief(const Belief& b);
  /// Same value, bit for bit, as dot(alpha, b).
  double dot(std::span<const double> alpha) const {
    double v = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) v += alpha[states[i]] * probs[i];
    return v;
  }
};

/// max_α α·b or min_α α·b. Throws EmptySet.
double alpha_eval(const AlphaSet& set, const Belief& b, EvalMode mode);
/// Index attaining alpha_eval; ties go to the lowest index.
std::size_t alpha_argbest(const AlphaSet& set, const Belief& b, EvalMode mode);

struct IterationOptions {
  double tolerance = 1e-6;
  int max_iterations = 10000;
  Exec exec = Exec::serial;
  /// If set, receives the sup-norm residual of every sweep.
  std::vector<double>* residuals = nullptr;
};

/// Fast Informed Bound. Reward: one alpha per action upper-bounding V*_R.
/// Cost: the min-dual, lower-bounding the optimal cost V*_C. The final
/// residual is converted into a safety margin so the result is a bound even
/// when iteration stops short of the fixed point.
AlphaSet fib_bound(const Model& m, Objective objective, const IterationOptions& opts = {});

/// Value of committing to one action forever, one alpha per action. Reward
/// starts from the best-action worst-state value and lower-bounds V*_R; cost
/// starts from zero and upper-bounds V*_C (use with EvalMode::min).
AlphaSet blind_lower_bound(const Model& m, Objective objective, const IterationOptions& opts = {});

/// Paired reward/cost values of one conditional plan whose first action is
/// `action`.
struct AlphaPair {
  int action = 0;
  std::vector<double> alpha_r;
  std::vector<double> alpha_c;
};
using AlphaPairSet = std::vector<AlphaPair>;

/// Blind plans as exact pairs: alpha_r is conservative from below and
/// alpha_c from above.
AlphaPairSet blind_pairs(const Model& m, const IterationOptions& opts = {});

AlphaSet cost_part(const AlphaPairSet& pairs);
AlphaSet reward_part(const AlphaPairSet& pairs);

/// Bounds used by tree search. Reward sets evaluate with max, cost sets
/// with min.
struct BoundSet {
  AlphaSet upper_r;
  AlphaSet lower_r;
  AlphaSet upper_c;
  AlphaSet lower_c;
};

BoundSet make_bound_set(const Model& m, const AlphaPairSet& gamma_cmin, const IterationOptions& opts = {});

/// max_b min_α α_c·b over the simplex, solved as an LP. Throws EmptySet.
double cmax_upper_bound(const AlphaPairSet& gamma_cmin);

nlohmann::json alpha_pairs_to_json(const AlphaPairSet& set);
/// Throws SchemaError.
AlphaPairSet alpha_pairs_from_json(const nlohmann::json& j, std::size_t num_states);

}  // namespace rcpomdp
