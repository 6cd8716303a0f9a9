#include <iostream>

#include <CLI11.hpp>

#include "glweyl/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace glweyl::cli;

  CLI::App app{"Weyl-compatible d-connections on generalized Lagrange spaces"};
  app.require_subcommand(1);

  RunOptions options;
  std::string engine;
  double fd_step = 0.0;
  std::size_t points = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--engine", engine, "Derivative engine")->check(CLI::IsMember({"symbolic", "fd"}));
    cmd->add_option("--fd-step", fd_step, "Base finite-difference step h0")->check(CLI::PositiveNumber);
    cmd->add_option("--points", points, "Number of sample points")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Sampling seed");
    cmd->add_option("--tolerance", tolerance, "Residual tolerance (replaces the engine default)")
        ->check(CLI::NonNegativeNumber);
  };

  app.add_subcommand("catalog", "List built-in scenarios");

  std::string scenario;
  std::string report;
  auto* check = app.add_subcommand("check", "Run every check on a scenario");
  check->add_option("scenario", scenario, "Catalog name or scenario file")->required();
  check->add_option("--report", report, "Write the JSON report to this path");
  add_run_flags(check);

  std::string point;
  auto* coeffs = app.add_subcommand("coeffs", "Print coefficients at one point");
  coeffs->add_option("scenario", scenario, "Catalog name or scenario file")->required();
  coeffs->add_option("--point", point, "Point as x1=..,y1=..")->required();
  add_run_flags(coeffs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  }

  CLI::App* active = app.get_subcommands().front();
  if (active->get_name() == "catalog") return cmd_catalog(std::cout);

  if (active->count("--engine")) options.engine = engine;
  if (active->count("--fd-step")) options.fd_step = fd_step;
  if (active->count("--points")) options.points = points;
  if (active->count("--seed")) options.seed = seed;
  if (active->count("--tolerance")) options.tolerance = tolerance;

  if (active->get_name() == "check") {
    std::optional<std::string> path;
    if (check->count("--report")) path = report;
    return cmd_check(scenario, options, path, std::cout, std::cerr);
  }
  return cmd_coeffs(scenario, point, options, std::cout, std::cerr);
}
