#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "rcpomdp/model.hpp"
#include "rcpomdp/policy.hpp"

namespace rcpomdp {

/// Rebuilds any exported policy ("arcs", "mixed", "cgcp-cl", "mincost",
/// "greedy") for the given model. Throws SchemaError.
std::unique_ptr<Policy> policy_from_json(const nlohmann::json& j, const Model& m);

std::unique_ptr<Policy> load_policy(const std::string& path, const Model& m);
void save_policy(const std::string& path, const Policy& policy);

}  // namespace rcpomdp
