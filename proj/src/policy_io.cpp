#include "rcpomdp/policy_io.hpp"

#include "rcpomdp/arcs.hpp"
#include "rcpomdp/baseline.hpp"
#include "rcpomdp/io.hpp"

namespace rcpomdp {

using nlohmann::json;

std::unique_ptr<Policy> policy_from_json(const json& j, const Model& m) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw SchemaError("$.type", "expected a policy type string");
  const std::string type = j["type"].get<std::string>();
  const std::size_t ns = m.num_states();
  if (type == "arcs") {
    auto tree = std::make_shared<const PolicyTree>(PolicyTree::from_json(j));
    if (tree->num_actions() != m.num_actions() || tree->num_observations() != m.num_observations() ||
        tree->root().b.size() != ns)
      throw SchemaError("$", "policy tree does not match the model dimensions");
    return std::make_unique<TreePolicy>(std::move(tree));
  }
  if (type == "mixed") return std::make_unique<MixedExecutor>(std::make_shared<const MixedPolicy>(MixedPolicy::from_json(j, ns)));
  if (type == "mincost") return make_min_cost_policy(std::make_shared<const AlphaPairSet>(alpha_pairs_from_json(j, ns)));
  if (type == "greedy") {
    if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].size() != 2)
      throw SchemaError("$.weights", "expected [wr, wc]");
    Scalarization w{j["weights"][0].get<double>(), j["weights"][1].get<double>()};
    return std::make_unique<GreedyPolicy>(std::make_shared<const AlphaPairSet>(alpha_pairs_from_json(j, ns)), w);
  }
  if (type == "cgcp-cl") {
    if (!j.contains("per_step_budget") || !j["per_step_budget"].is_number())
      throw SchemaError("$.per_step_budget", "expected a number");
    if (!j.contains("gamma_cmin")) throw SchemaError("$.gamma_cmin", "missing field");
    CgcpOptions opts;
    opts.time_budget = j["per_step_budget"].get<double>();
    opts.subproblem_budget = opts.time_budget;
    if (j.contains("max_iterations") && j["max_iterations"].is_number_integer())
      opts.max_iterations = j["max_iterations"].get<int>();
    return std::make_unique<ClosedLoopPolicy>(std::make_shared<const Model>(m), opts,
                                              std::make_shared<const AlphaPairSet>(alpha_pairs_from_json(j["gamma_cmin"], ns)));
  }
  throw SchemaError("$.type", "unknown policy type \"" + type + "\"");
}

std::unique_ptr<Policy> load_policy(const std::string& path, const Model& m) { return policy_from_json(read_json_file(path), m); }

void save_policy(const std::string& path, const Policy& policy) { write_json_file(policy.to_json(), path); }

}  // namespace rcpomdp
