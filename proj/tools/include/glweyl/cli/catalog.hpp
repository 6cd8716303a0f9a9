#pragma once

// Built-in scenarios, addressable by name from the command line.

#include <optional>
#include <string>
#include <vector>

#include "glweyl/cli/scenario_file.hpp"

namespace glweyl::cli {

struct CatalogEntry {
  std::string name;
  std::string summary;
  ScenarioSpec spec;
};

/// Fixed order: euclidean, sphere, euclid-weyl, gl-quadratic.
const std::vector<CatalogEntry>& catalog();

std::optional<ScenarioSpec> catalog_spec(const std::string& name);

/// A catalog name or a path to a scenario file. Throws ScenarioError.
LoadedScenario resolve_scenario(const std::string& name_or_path);

}  // namespace glweyl::cli
