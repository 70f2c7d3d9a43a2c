#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <yaml-cpp/yaml.h>

#include "metriplectic/dynamics.hpp"

namespace metriplectic::cli {

struct OutputConfig {
  std::filesystem::path directory = ".";
  std::string prefix;  // defaults to the system name
};

struct CompareConfig {
  double tolerance = 1e-8;  // per unit of simulated time, at least one unit
};

/// A parsed and fully validated scenario. Construction performs every
/// precondition check, so nothing downstream needs to touch the file system
/// before the config is known to be good.
struct ScenarioConfig {
  SystemSpec system;
  State initial_state;
  IntegratorOptions integrator;
  OutputConfig output;
  CompareConfig compare;
};

/// System names understood by configs and by `verify --system`.
[[nodiscard]] const std::vector<std::string>& system_names();

/// Builds a system from a YAML node with `system` and optional `parameters`.
/// Missing parameters take the documented defaults. Throws ConfigError or
/// the registration error of the system.
[[nodiscard]] SystemSpec system_from_yaml(const YAML::Node& root);

/// The system `name` with default parameters.
[[nodiscard]] SystemSpec default_system(const std::string& name);

[[nodiscard]] ScenarioConfig scenario_from_yaml(const YAML::Node& root);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path& path);
[[nodiscard]] YAML::Node load_yaml(const std::filesystem::path& path);

}  // namespace metriplectic::cli
