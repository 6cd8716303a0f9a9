#pragma once

// Command implementations, separated from argument parsing so tests can
// drive them directly. Each returns one of the kExit* codes below.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "glweyl/cli/scenario_file.hpp"

namespace glweyl::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// Command-line overrides applied on top of the scenario's own settings.
struct RunOptions {
  std::optional<std::string> engine;
  std::optional<double> fd_step;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

void apply(const RunOptions& options, ScenarioSpec& spec);

int cmd_catalog(std::ostream& out);

/// Writes the JSON report to `report_path` when given, else to `out`;
/// the per-check summary goes to `err`.
int cmd_check(const std::string& scenario, const RunOptions& options, const std::optional<std::string>& report_path,
              std::ostream& out, std::ostream& err);

/// `point` is "x1=...,y1=...,"; unspecified coordinates are 0.
int cmd_coeffs(const std::string& scenario, const std::string& point, const RunOptions& options, std::ostream& out,
               std::ostream& err);

/// Throws std::invalid_argument on malformed text or out-of-range indices.
PointTM parse_point(const std::string& text, int n);

}  // namespace glweyl::cli
