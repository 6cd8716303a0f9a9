#include "glweyl/cli/report.hpp"

#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include <nlohmann/json.hpp>

namespace glweyl::cli {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; errors inside a check surface as an infinite
// residual, which is written as a string instead of null.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json point_json(const PointTM& p) {
  Json j;
  j["x"] = p.x;
  j["y"] = p.y;
  return j;
}

const char* bound_name(CheckReport::Bound b) { return b == CheckReport::Bound::upper ? "upper" : "lower"; }

}  // namespace

std::string report_json(const Scenario& s, const std::vector<CheckReport>& reports) {
  Json doc;
  doc["scenario"] = s.name;
  doc["dimension"] = s.dimension();
  doc["engine"] = s.engine.name();
  doc["fd_step"] = s.engine.h0;
  doc["seed"] = s.seed;
  doc["points"] = s.points;
  doc["domain"] = s.box.describe();
  doc["gauges"] = s.gauge_labels;

  bool all = true;
  Json checks = Json::array();
  for (const auto& r : reports) {
    all = all && r.passed;
    Json c;
    c["name"] = r.name;
    c["pass"] = r.passed;
    c["worst_residual"] = number(r.worst_residual);
    c["tolerance"] = number(r.tolerance);
    c["bound"] = bound_name(r.bound);
    if (r.witness) {
      c["witness_point"] = point_json(r.witness->point);
      Json index = Json::array();
      for (int k : r.witness->index) {
        if (k >= 0) index.push_back(k + 1);
      }
      c["witness_index"] = index;
      if (r.witness->gauge && *r.witness->gauge < s.gauge_labels.size()) {
        c["witness_gauge"] = s.gauge_labels[*r.witness->gauge];
      }
    } else {
      c["witness_point"] = nullptr;
    }
    c["engine"] = r.engine;
    c["point_count"] = r.point_count;
    c["seed"] = r.seed;
    c["domain"] = r.domain;
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    c["metrics"] = metrics;
    Json conditions = Json::object();
    for (const auto& [k, v] : r.conditions) conditions[k] = v;
    c["conditions"] = conditions;
    if (!r.message.empty()) c["message"] = r.message;
    checks.push_back(std::move(c));
  }
  doc["all_passed"] = all;
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

std::string report_summary(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  for (const auto& r : reports) {
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << r.name << " worst "
        << format_value(r.worst_residual) << (r.bound == CheckReport::Bound::upper ? " <= " : " >= ")
        << format_value(r.tolerance);
    if (!r.message.empty()) out << "  (" << r.message << ")";
    out << "\n";
  }
  return out.str();
}

std::string format_value(double v) {
  if (v == 0.0) v = 0.0;
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(12) << v;
  return out.str();
}

}  // namespace glweyl::cli
