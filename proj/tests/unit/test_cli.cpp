#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "glweyl/cli/catalog.hpp"
#include "glweyl/cli/commands.hpp"
#include "glweyl/cli/report.hpp"
#include "glweyl/cli/scenario_file.hpp"

using namespace glweyl;
using namespace glweyl::cli;

namespace {

const std::string kData = GLWEYL_TEST_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

ScenarioError scenario_error(const std::string& text) {
  try {
    build_scenario(parse_scenario_text(text, "inline.toml").spec, parse_scenario_text(text, "inline.toml").source);
  } catch (const ScenarioError& e) {
    return e;
  }
  ADD_FAILURE() << "no ScenarioError for:\n" << text;
  return ScenarioError("", 0, "", "");
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("glweyl_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(ScenarioFile, ParsesEverySection) {
  const auto loaded = load_scenario_file(data("gl_quadratic_n3.toml"));
  const ScenarioSpec& s = loaded.spec;
  EXPECT_EQ(s.name, "gl-quadratic-n3");
  EXPECT_EQ(s.n, 3);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.x_box.size(), 1u);
  EXPECT_EQ(s.y_box.size(), 3u);
  EXPECT_EQ(s.metric.size(), 3u);
  EXPECT_EQ(s.nonlinear.at({3, 2}), "sin(x1)*y2");
  EXPECT_EQ(s.weyl.at(3), "0.1*x1*x3");
  EXPECT_EQ(s.gauges.size(), 3u);
  EXPECT_EQ(loaded.source.line_of("metric", "g_2_2"), 13);
}

TEST(ScenarioFile, SerializeRoundTrip) {
  for (const auto& entry : catalog()) {
    const ScenarioSpec back = parse_scenario_text(serialize(entry.spec), "rt.toml").spec;
    EXPECT_EQ(back, entry.spec) << entry.name;
  }
  for (const char* file : {"gl_quadratic_n3.toml", "lorentz_n2.toml", "signature_violation.toml"}) {
    const ScenarioSpec spec = load_scenario_file(data(file)).spec;
    EXPECT_EQ(parse_scenario_text(serialize(spec), "rt.toml").spec, spec) << file;
  }
}

TEST(ScenarioFile, RoundTripGivesEquivalentScenario) {
  const ScenarioSpec spec = load_scenario_file(data("lorentz_n2.toml")).spec;
  const Scenario a = build_scenario(spec);
  const Scenario b = build_scenario(parse_scenario_text(serialize(spec), "rt.toml").spec);
  const auto pa = sample_points(a);
  EXPECT_EQ(pa, sample_points(b));
  for (const auto& p : pa) {
    EXPECT_EQ(a.metric.evaluate(p), b.metric.evaluate(p));
    EXPECT_EQ(a.nonlinear.evaluate(p), b.nonlinear.evaluate(p));
  }
}

TEST(ScenarioFile, LowerTriangleIsMirroredAndMissingEntriesAreZero) {
  const Scenario s = build_scenario(load_scenario_file(data("lorentz_n2.toml")).spec);
  const PointTM p({0.3, 0.1}, {0.2, 0.0});
  const auto g = s.metric.evaluate(p);
  EXPECT_DOUBLE_EQ(g(1, 0), g(0, 1));
  EXPECT_DOUBLE_EQ(g(0, 1), 0.03);
  EXPECT_DOUBLE_EQ(s.nonlinear.evaluate(p)(0, 0), 0.0);
}

TEST(ScenarioFile, CommentsMultilineArraysAndEscapes) {
  const auto loaded = parse_scenario_text(R"(# header
[scenario]   # trailing
name = "a \"quoted\" # name"
n = 2
x_box = [
  [0.0, 1.0],   # first
  [-2, 2],
]
[metric]
g_1_1 = "1"
g_2_2 = "1"
[gauges]
f = ["0",
     "x1"]
)",
                                          "c.toml");
  EXPECT_EQ(loaded.spec.name, "a \"quoted\" # name");
  ASSERT_EQ(loaded.spec.x_box.size(), 2u);
  EXPECT_EQ(loaded.spec.x_box[1], (std::pair<double, double>{-2.0, 2.0}));
  EXPECT_EQ(loaded.spec.gauges, (std::vector<std::string>{"0", "x1"}));
}

TEST(ScenarioFile, ErrorsNameFileLineAndField) {
  auto e = scenario_error("[scenario]\nn = 2\n\n[metric]\ng_1_1 = \"1\"\ng_2_2 = \"sin(x1\"\n");
  EXPECT_EQ(e.file(), "inline.toml");
  EXPECT_EQ(e.line(), 6);
  EXPECT_EQ(e.field(), "metric.g_2_2");
  EXPECT_NE(std::string(e.what()).find("offset 7"), std::string::npos) << e.what();

  e = scenario_error("[scenario]\nn = 2\ncolour = \"red\"\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.field(), "scenario.colour");

  e = scenario_error("[scenario]\nn = two\n");
  EXPECT_EQ(e.field(), "scenario.n");

  e = scenario_error("[scenario]\nn = 2\n[metric]\ng_3_1 = \"1\"\n");
  EXPECT_EQ(e.field(), "metric.g_3_1");

  e = scenario_error("[scenario]\nn = 2\n[metric]\ng_1_1 = \"1\"\n[weyl]\nw_1 = \"y1\"\n");
  EXPECT_EQ(e.field(), "weyl.w_1");

  e = scenario_error("[scenario]\nn = 2\n[metric]\ng_1_1 = \"1\"\n[gauges]\nf = [\"y2\"]\n");
  EXPECT_EQ(e.field(), "gauges.f");

  e = scenario_error("[scenario]\nn = 2\n[metric]\ng_1_1 = \"1\"\n[mystery]\nk = 1\n");
  EXPECT_EQ(e.field(), "mystery");

  e = scenario_error("[scenario]\nn = 2\nengine = \"magic\"\n");
  EXPECT_EQ(e.field(), "scenario.engine");

  e = scenario_error("[scenario]\nn = 2\nx_box = [1, 0]\n");
  EXPECT_EQ(e.field(), "scenario.x_box");

  e = scenario_error("[scenario]\nn = 2\nn = 3\n");
  EXPECT_EQ(e.line(), 3);

  e = scenario_error("[metric]\ng_1_1 = \"1\"\n");
  EXPECT_EQ(e.field(), "scenario");

  e = scenario_error("[scenario]\nn = 2\n[metric]\ng_1_1 = \"1 + y1^2\"\n[nonlinear]\ncanonical = true\n");
  EXPECT_EQ(e.field(), "nonlinear.canonical");
}

TEST(Catalog, FourEntriesThatLoadAndPassMetric) {
  ASSERT_EQ(catalog().size(), 4u);
  std::ostringstream listing;
  EXPECT_EQ(cmd_catalog(listing), 0);
  for (const auto& e : catalog()) {
    EXPECT_NE(listing.str().find(e.name), std::string::npos);
    const Scenario s = build_scenario(e.spec);
    EXPECT_TRUE(check_metric(s).passed) << e.name;
  }
  EXPECT_FALSE(catalog_spec("nope").has_value());
}

TEST(Commands, CheckExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check("euclidean", {}, std::nullopt, out, err), kExitPass);

  std::ostringstream out1, err1;
  EXPECT_EQ(cmd_check(data("signature_violation.toml"), {}, std::nullopt, out1, err1), kExitCheckFailed);
  const auto report = nlohmann::json::parse(out1.str());
  EXPECT_EQ(report["checks"][0]["name"], "metric");
  EXPECT_FALSE(report["checks"][0]["pass"].get<bool>());

  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_check(data("malformed_expression.toml"), {}, std::nullopt, out2, err2), kExitInputError);
  EXPECT_NE(err2.str().find("malformed_expression.toml:7"), std::string::npos) << err2.str();
  EXPECT_NE(err2.str().find("metric.g_2_2"), std::string::npos);
  EXPECT_NE(err2.str().find("offset 7"), std::string::npos);

  std::ostringstream out3, err3;
  EXPECT_EQ(cmd_check("no-such-scenario", {}, std::nullopt, out3, err3), kExitInputError);
}

TEST(Commands, ReportFieldsAndOverrides) {
  RunOptions options;
  options.engine = "fd";
  options.points = 16;
  options.seed = 9;
  const auto path = temp_file("report.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_check("euclid-weyl", options, path.string(), out, err), kExitPass);
  EXPECT_TRUE(out.str().empty());
  std::ifstream in(path);
  const auto report = nlohmann::json::parse(in);
  std::filesystem::remove(path);
  EXPECT_EQ(report["engine"], "fd");
  for (const auto& c : report["checks"]) {
    for (const char* key : {"name", "pass", "worst_residual", "witness_point", "tolerance", "engine", "point_count", "seed"})
      EXPECT_TRUE(c.contains(key)) << key;
    EXPECT_EQ(c["engine"], "fd");
    EXPECT_EQ(c["seed"], 9);
    EXPECT_EQ(c["point_count"], 16);
  }

  RunOptions strict;
  strict.tolerance = 0.0;
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_check("sphere", strict, std::nullopt, out2, err2), kExitCheckFailed);
}

TEST(Commands, ReportIsDeterministic) {
  std::ostringstream a, b, ea, eb;
  cmd_check("gl-quadratic", {}, std::nullopt, a, ea);
  cmd_check("gl-quadratic", {}, std::nullopt, b, eb);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Commands, CoeffsTables) {
  auto value_of = [](const std::string& table, const std::string& quantity, const std::string& index) {
    std::istringstream in(table);
    std::string q, i, v;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      if (row >> q >> i >> v && q == quantity && i == index) return v;
    }
    return std::string("<missing>");
  };

  std::ostringstream out, err;
  ASSERT_EQ(cmd_coeffs("euclidean", "x1=0,x2=0", {}, out, err), 0);
  for (const char* idx : {"^1_1_1", "^1_1_2", "^1_2_2", "^2_1_1", "^2_2_2"}) {
    EXPECT_EQ(value_of(out.str(), "F_cr", idx), "0");
    EXPECT_EQ(value_of(out.str(), "F_weyl", idx), "0");
  }

  std::ostringstream s, se;
  ASSERT_EQ(cmd_coeffs("sphere", "x1=0.78539816339744831,y2=1", {}, s, se), 0);
  EXPECT_EQ(value_of(s.str(), "F_cr", "^1_2_2"), "-0.5");
  EXPECT_EQ(value_of(s.str(), "F_weyl", "^1_2_2"), "-0.5");

  std::ostringstream w, we;
  ASSERT_EQ(cmd_coeffs("euclid-weyl", "x1=0", {}, w, we), 0);
  EXPECT_EQ(value_of(w.str(), "F_weyl", "^1_1_1"), "-0.2");
  EXPECT_EQ(value_of(w.str(), "w", "_1"), "0.4");

  std::ostringstream bad, bade;
  EXPECT_EQ(cmd_coeffs("euclidean", "x3=1", {}, bad, bade), kExitInputError);
  EXPECT_EQ(cmd_coeffs("euclidean", "x1=abc", {}, bad, bade), kExitInputError);
  EXPECT_EQ(cmd_coeffs("sphere", "x1=0", {}, bad, bade), kExitInputError);
}

TEST(Commands, ParsePoint) {
  const PointTM p = parse_point("x1=1.5, y2=-2e-1,x2=3", 2);
  EXPECT_EQ(p.x, (std::vector<double>{1.5, 3.0}));
  EXPECT_EQ(p.y, (std::vector<double>{0.0, -0.2}));
  EXPECT_THROW(parse_point("z1=1", 2), std::invalid_argument);
  EXPECT_THROW(parse_point("x1=1=2", 2), std::invalid_argument);
}

TEST(Report, FormatValue) {
  EXPECT_EQ(format_value(-0.0), "0");
  EXPECT_EQ(format_value(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_value(-1234567.891234567), "-1234567.89123");
  EXPECT_EQ(format_value(1e-20), "1e-20");
}

// The installed binary, driven as a subprocess.
TEST(Binary, ExitCodeContract) {
  const std::string bin = GLWEYL_BINARY;
  auto run = [&](const std::string& args) {
    const int status = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("catalog"), 0);
  EXPECT_EQ(run("check euclidean"), 0);
  EXPECT_EQ(run("check " + data("signature_violation.toml")), 1);
  EXPECT_EQ(run("check " + data("malformed_expression.toml")), 2);
  EXPECT_EQ(run("check euclidean --engine nope"), 2);
  EXPECT_EQ(run("coeffs sphere --point x1=0.7"), 0);
  EXPECT_EQ(run("coeffs sphere"), 2);
  EXPECT_EQ(run(""), 2);
}
