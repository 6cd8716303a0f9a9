#include "glweyl/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "glweyl/cli/catalog.hpp"
#include "glweyl/cli/report.hpp"

namespace glweyl::cli {

void apply(const RunOptions& options, ScenarioSpec& spec) {
  if (options.engine) spec.engine = *options.engine;
  if (options.fd_step) spec.fd_step = *options.fd_step;
  if (options.points) spec.points = *options.points;
  if (options.seed) spec.seed = *options.seed;
  if (options.tolerance) spec.tolerance = *options.tolerance;
}

namespace {

Scenario load(const std::string& scenario, const RunOptions& options) {
  LoadedScenario loaded = resolve_scenario(scenario);
  apply(options, loaded.spec);
  return build_scenario(loaded.spec, loaded.source);
}

}  // namespace

int cmd_catalog(std::ostream& out) {
  for (const auto& e : catalog()) out << std::left << std::setw(14) << e.name << " " << e.summary << "\n";
  return kExitPass;
}

int cmd_check(const std::string& scenario, const RunOptions& options, const std::optional<std::string>& report_path,
              std::ostream& out, std::ostream& err) {
  std::optional<Scenario> s;
  try {
    s.emplace(load(scenario, options));
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << scenario << ": " << e.what() << "\n";
    return kExitInputError;
  }

  const std::vector<CheckReport> reports = run_all_checks(*s);
  const std::string json = report_json(*s, reports);
  if (report_path) {
    std::ofstream file(*report_path, std::ios::binary);
    if (!file || !(file << json)) {
      err << "error: cannot write report to " << *report_path << "\n";
      return kExitInputError;
    }
  } else {
    out << json;
  }
  err << report_summary(reports);

  for (const auto& r : reports) {
    if (!r.passed) return kExitCheckFailed;
  }
  return kExitPass;
}

PointTM parse_point(const std::string& text, int n) {
  PointTM p(n);
  static const std::regex item(R"(\s*([xy])([0-9]+)\s*=\s*([^,]+?)\s*)");
  std::stringstream items(text);
  std::string part;
  while (std::getline(items, part, ',')) {
    if (part.find_first_not_of(" \t") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(part, m, item)) throw std::invalid_argument("cannot read point component '" + part + "'");
    const int index = std::stoi(m[2].str());
    if (index < 1 || index > n) {
      throw std::invalid_argument("coordinate " + m[1].str() + m[2].str() + " outside 1.." + std::to_string(n));
    }
    std::istringstream value(m[3].str());
    value.imbue(std::locale::classic());
    double v = 0.0;
    value >> v;
    if (value.fail() || !value.eof()) throw std::invalid_argument("cannot read number '" + m[3].str() + "'");
    (m[1].str() == "x" ? p.x : p.y)[static_cast<std::size_t>(index - 1)] = v;
  }
  return p;
}

namespace {

void row(std::ostream& out, const std::string& quantity, const std::string& index, double value) {
  out << std::left << std::setw(10) << quantity << std::setw(10) << index << format_value(value) << "\n";
}

std::string idx(std::initializer_list<std::pair<char, int>> parts) {
  std::string s;
  for (auto [mark, i] : parts) s += mark + std::to_string(i + 1);
  return s;
}

}  // namespace

int cmd_coeffs(const std::string& scenario, const std::string& point, const RunOptions& options, std::ostream& out,
               std::ostream& err) {
  std::optional<Scenario> s;
  PointTM p(1);
  try {
    s.emplace(load(scenario, options));
    p = parse_point(point, s->dimension());
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const int n = s->dimension();
  std::ostringstream table;
  table.imbue(std::locale::classic());
  try {
    const Eigen::MatrixXd g = s->metric.evaluate(p);
    const Eigen::MatrixXd ginv = inverse(s->metric, p);
    const Eigen::MatrixXd N = s->nonlinear.evaluate(p);
    const Array3 cr = chern_rund(s->metric, s->nonlinear, s->engine).evaluate(p).F;
    const Array3 wf = weyl_connection(s->metric, s->nonlinear, s->weyl_anchor, s->engine).evaluate(p).F;
    const std::vector<double> w = evaluate(s->weyl_anchor, p);
    const std::vector<double> wup = raise_index(s->weyl_anchor, s->metric, p);

    table << "# scenario " << s->name << " at " << to_string(p) << "\n";
    table << std::left << std::setw(10) << "quantity" << std::setw(10) << "index" << "value\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) row(table, "g", idx({{'_', i}, {'_', j}}), g(i, j));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) row(table, "g_inv", idx({{'^', i}, {'^', j}}), ginv(i, j));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) row(table, "N", idx({{'^', j}, {'_', i}}), N(j, i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) row(table, "F_cr", idx({{'^', i}, {'_', j}, {'_', k}}), cr(i, j, k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) row(table, "F_weyl", idx({{'^', i}, {'_', j}, {'_', k}}), wf(i, j, k));
    for (int i = 0; i < n; ++i) row(table, "w", idx({{'_', i}}), w[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) row(table, "w_up", idx({{'^', i}}), wup[static_cast<std::size_t>(i)]);
  } catch (const std::exception& e) {
    err << "error: cannot evaluate coefficients at " << to_string(p) << ": " << e.what() << "\n";
    return kExitInputError;
  }
  out << table.str();
  return kExitPass;
}

}  // namespace glweyl::cli
