#include "glweyl/cli/catalog.hpp"

#include <filesystem>

namespace glweyl::cli {

namespace {

ScenarioSpec euclidean() {
  ScenarioSpec s;
  s.name = "euclidean";
  s.n = 2;
  s.metric = {{{1, 1}, "1"}, {{2, 2}, "1"}};
  s.gauges = {"0", "x1"};
  return s;
}

ScenarioSpec sphere() {
  ScenarioSpec s;
  s.name = "sphere";
  s.n = 2;
  s.x_box = {{0.3, 2.8}, {-1.0, 1.0}};
  s.exclusions = {"sin(x1)"};
  s.metric = {{{1, 1}, "1"}, {{2, 2}, "sin(x1)^2"}};
  s.canonical_nonlinear = true;
  s.gauges = {"0", "sin(x2)"};
  return s;
}

ScenarioSpec euclid_weyl() {
  ScenarioSpec s;
  s.name = "euclid-weyl";
  s.n = 2;
  s.metric = {{{1, 1}, "1"}, {{2, 2}, "1"}};
  s.weyl = {{1, "0.4"}};
  s.gauges = {"0", "0.3*x1"};
  return s;
}

ScenarioSpec gl_quadratic() {
  ScenarioSpec s;
  s.name = "gl-quadratic";
  s.n = 2;
  const std::string conformal = "1 + x1^2 + y1^2 + y2^2";
  s.metric = {{{1, 1}, conformal}, {{2, 2}, conformal}};
  s.weyl = {{1, "0.2*x2"}};
  s.gauges = {"0", "0.1*sin(x2)"};
  return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"euclidean", "delta metric, N = 0, w = 0, n = 2", euclidean()},
      {"sphere", "diag(1, sin(x1)^2), canonical N, w = 0, x1 in [0.3, 2.8]", sphere()},
      {"euclid-weyl", "delta metric, N = 0, w0 = (0.4, 0), gauges {0, 0.3*x1}", euclid_weyl()},
      {"gl-quadratic", "(1 + x1^2 + y1^2 + y2^2) delta_ij, N = 0, w0 = (0.2*x2, 0), gauges {0, 0.1*sin(x2)}",
       gl_quadratic()},
  };
  return entries;
}

std::optional<ScenarioSpec> catalog_spec(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e.spec;
  }
  return std::nullopt;
}

LoadedScenario resolve_scenario(const std::string& name_or_path) {
  if (auto spec = catalog_spec(name_or_path)) {
    LoadedScenario loaded;
    loaded.spec = std::move(*spec);
    loaded.source.file = "<catalog:" + name_or_path + ">";
    return loaded;
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw ScenarioError(name_or_path, 0, "<scenario>", "not a catalog name and no such file");
  }
  return load_scenario_file(name_or_path);
}

}  // namespace glweyl::cli
