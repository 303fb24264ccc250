#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rcpomdp/model.hpp"

namespace rcpomdp {

/// Malformed JSON input. what() starts with the offending field path.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

nlohmann::json model_to_json(const Model& m);
/// Throws SchemaError on structural problems, StochasticityError on rows
/// that fail the 1e-9 sum check.
Model model_from_json(const nlohmann::json& j);

Model load_model(const std::filesystem::path& path);
void save_model(const Model& m, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace rcpomdp
