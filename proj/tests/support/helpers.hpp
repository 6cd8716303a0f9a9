#pragma once

#include <numbers>
#include <string>

#include "glweyl/cli/catalog.hpp"
#include "glweyl/cli/scenario_file.hpp"

namespace testing_support {

inline constexpr double kPi = std::numbers::pi;

inline glweyl::Scenario catalog_scenario(const std::string& name, const std::string& engine = "symbolic") {
  auto spec = glweyl::cli::catalog_spec(name);
  if (!spec) throw std::invalid_argument("no catalog scenario " + name);
  spec->engine = engine;
  return glweyl::cli::build_scenario(*spec);
}

inline glweyl::ScalarField field(const std::string& text, int n = 2) { return glweyl::parse(text, n); }

inline glweyl::PointTM point(std::vector<double> x, std::vector<double> y) { return {std::move(x), std::move(y)}; }

}  // namespace testing_support
