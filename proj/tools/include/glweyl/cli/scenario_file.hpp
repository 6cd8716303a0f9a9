#pragma once

// Scenario files: a TOML-compatible subset with sections [scenario],
// [metric], [nonlinear], [weyl] and [gauges]. See README.md for the layout.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glweyl/verify.hpp"

namespace glweyl::cli {

/// Input error that names the file, line and field it came from.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string file, int line, std::string field, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  int line_;
  std::string field_;
};

/// Textual scenario description; all expressions are kept as source text.
/// Index pairs are 1-based as written in the file.
struct ScenarioSpec {
  std::string name = "unnamed";
  int n = 2;
  std::uint64_t seed = 42;
  std::size_t points = 64;
  std::string engine = "symbolic";
  double fd_step = 1e-5;
  std::optional<double> tolerance;
  std::vector<std::pair<double, double>> x_box;
  std::vector<std::pair<double, double>> y_box;
  std::vector<std::string> exclusions;
  double exclusion_margin = 1e-3;
  std::optional<std::pair<int, int>> signature;

  /// (i, j) -> g_ij. A missing partner (j, i) mirrors this entry.
  std::map<std::pair<int, int>, std::string> metric;
  bool canonical_nonlinear = false;
  /// (j, i) -> N^j_i.
  std::map<std::pair<int, int>, std::string> nonlinear;
  /// i -> w_i.
  std::map<int, std::string> weyl;
  std::vector<std::string> gauges;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Where each field was read from, for error messages.
struct SourceMap {
  std::string file;
  std::map<std::string, int> lines;  ///< "section.key" -> 1-based line

  int line_of(const std::string& section, const std::string& key) const;
};

struct LoadedScenario {
  ScenarioSpec spec;
  SourceMap source;
};

/// Throws ScenarioError.
LoadedScenario parse_scenario_text(const std::string& text, const std::string& file_name);
LoadedScenario load_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario_text(serialize(s)) == s.
std::string serialize(const ScenarioSpec& spec);

/// Parses every expression and assembles the Scenario. Throws ScenarioError
/// naming the offending field (and, for expressions, the byte offset).
Scenario build_scenario(const ScenarioSpec& spec, const SourceMap& source = {});

}  // namespace glweyl::cli
