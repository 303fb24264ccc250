#pragma once

#include <memory>
#include <random>

#include <json.hpp>

#include "rcpomdp/arcs.hpp"
#include "rcpomdp/bounds.hpp"
#include "rcpomdp/model.hpp"
#include "rcpomdp/point_based.hpp"

namespace rcpomdp {

/// Executable policy. One instance drives one trial at a time: reset, then
/// alternate act and observe. clone() gives an independent copy for another
/// trial; immutable data is shared.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual void reset(std::mt19937_64& rng) { (void)rng; }
  /// Action for the current belief and admissible cost.
  virtual int act(const Belief& b, double d, std::mt19937_64& rng) = 0;
  virtual void observe(int action, int observation) {
    (void)action;
    (void)observation;
  }
  virtual nlohmann::json to_json() const = 0;
};

/// Greedy over an alpha-pair set under a fixed scalarization.
class GreedyPolicy : public Policy {
 public:
  GreedyPolicy(std::shared_ptr<const AlphaPairSet> alphas, Scalarization w);
  std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyPolicy>(*this); }
  int act(const Belief& b, double d, std::mt19937_64& rng) override;
  nlohmann::json to_json() const override;

  const AlphaPairSet& alphas() const { return *alphas_; }
  Scalarization weights() const { return w_; }

 private:
  std::shared_ptr<const AlphaPairSet> alphas_;
  Scalarization w_;
};

/// Greedy minimum expected cost policy over Γ_cmin.
std::unique_ptr<Policy> make_min_cost_policy(std::shared_ptr<const AlphaPairSet> gamma_cmin);

/// Follows an ARCS tree along the executed (action, observation) pairs;
/// leaves the tree at unexpanded children and dead ends, and from then on
/// acts greedily on Γ_cmin.
class TreePolicy : public Policy {
 public:
  explicit TreePolicy(std::shared_ptr<const PolicyTree> tree);
  std::unique_ptr<Policy> clone() const override { return std::make_unique<TreePolicy>(*this); }
  void reset(std::mt19937_64& rng) override;
  int act(const Belief& b, double d, std::mt19937_64& rng) override;
  void observe(int action, int observation) override;
  nlohmann::json to_json() const override { return tree_->to_json(); }

  /// Current node, or -1 once off the tree.
  int node() const { return node_; }

 private:
  std::shared_ptr<const PolicyTree> tree_;
  int node_ = 0;
};

}  // namespace rcpomdp
