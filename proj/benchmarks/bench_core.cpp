#include <benchmark/benchmark.h>

#include "glweyl/cli/catalog.hpp"
#include "glweyl/verify.hpp"

using namespace glweyl;

namespace {

Scenario load(const char* name, const char* engine = "symbolic") {
  auto spec = *cli::catalog_spec(name);
  spec.engine = engine;
  return cli::build_scenario(spec);
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse("sqrt(1 + (x1*y2)^2) / (2 + sin(x2)) - exp(cos(y1))", 2));
}
BENCHMARK(BM_Parse);

void BM_EvaluateDerivative(benchmark::State& state) {
  const Expr e = differentiate(parse("sqrt(1 + (x1*y2)^2) / (2 + sin(x2)) - exp(cos(y1))", 2), Variable::x(0));
  const PointTM p({0.3, -0.2}, {0.5, 0.7});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(e, p));
}
BENCHMARK(BM_EvaluateDerivative);

void BM_WeylCoefficients(benchmark::State& state, const char* name, const char* engine) {
  const Scenario s = load(name, engine);
  const auto conn = weyl_connection(s.metric, s.nonlinear, s.weyl_anchor, s.engine);
  const auto pts = sample_points(s);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(conn.evaluate(pts[k++ % pts.size()]));
}
BENCHMARK_CAPTURE(BM_WeylCoefficients, sphere_symbolic, "sphere", "symbolic");
BENCHMARK_CAPTURE(BM_WeylCoefficients, gl_quadratic_symbolic, "gl-quadratic", "symbolic");
BENCHMARK_CAPTURE(BM_WeylCoefficients, gl_quadratic_fd, "gl-quadratic", "fd");

void BM_RunAllChecks(benchmark::State& state, const char* name) {
  const Scenario s = load(name);
  for (auto _ : state) benchmark::DoNotOptimize(run_all_checks(s));
}
BENCHMARK_CAPTURE(BM_RunAllChecks, euclidean, "euclidean")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunAllChecks, gl_quadratic, "gl-quadratic")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
