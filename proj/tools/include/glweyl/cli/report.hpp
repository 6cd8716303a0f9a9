#pragma once

#include <string>
#include <vector>

#include "glweyl/verify.hpp"

namespace glweyl::cli {

/// JSON document for one `check` run. Keys are emitted in a fixed order and
/// doubles in shortest round-trip form, so equal inputs give equal bytes.
std::string report_json(const Scenario& s, const std::vector<CheckReport>& reports);

/// One human-readable line per check.
std::string report_summary(const std::vector<CheckReport>& reports);

/// Fixed 12 significant digits, classic locale, no negative zero.
std::string format_value(double v);

}  // namespace glweyl::cli
