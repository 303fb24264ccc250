#include "rcpomdp/policy.hpp"

namespace rcpomdp {

using nlohmann::json;

GreedyPolicy::GreedyPolicy(std::shared_ptr<const AlphaPairSet> alphas, Scalarization w)
    : alphas_(std::move(alphas)), w_(w) {
  if (!alphas_ || alphas_->empty()) throw EmptySet("greedy policy needs a nonempty alpha set");
}

int GreedyPolicy::act(const Belief& b, double, std::mt19937_64&) { return (*alphas_)[best_pair(*alphas_, b, w_)].action; }

json GreedyPolicy::to_json() const {
  json j = alpha_pairs_to_json(*alphas_);
  if (w_.wr == kMinCost.wr && w_.wc == kMinCost.wc) {
    j["type"] = "mincost";
  } else {
    j["type"] = "greedy";
    j["weights"] = {w_.wr, w_.wc};
  }
  return j;
}

std::unique_ptr<Policy> make_min_cost_policy(std::shared_ptr<const AlphaPairSet> gamma_cmin) {
  return std::make_unique<GreedyPolicy>(std::move(gamma_cmin), kMinCost);
}

TreePolicy::TreePolicy(std::shared_ptr<const PolicyTree> tree) : tree_(std::move(tree)) {}

void TreePolicy::reset(std::mt19937_64&) { node_ = 0; }

int TreePolicy::act(const Belief& b, double, std::mt19937_64&) {
  if (node_ >= 0 && !tree_->node(node_).dead_end) return tree_->node(node_).action;
  node_ = -1;
  return min_cost_action(tree_->gamma_cmin(), b);
}

void TreePolicy::observe(int action, int observation) {
  if (node_ < 0) return;
  const auto& n = tree_->node(node_);
  node_ = action == n.action ? n.child(action, observation, tree_->num_observations()) : -1;
}

}  // namespace rcpomdp
