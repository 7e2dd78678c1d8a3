// Serial reference vs OpenMP evaluation of the finite-difference kernels.
// Arg 0 selects serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <memory>

#include "bipoisson/poisson.hpp"
#include "bipoisson/seeding.hpp"

namespace {

using namespace bipoisson;

struct Fixture {
  std::shared_ptr<const Chart> chart;
  Vector coords;
  PoissonField eta1, eta2;

  explicit Fixture(int n, std::vector<double> spectrum) {
    auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::special_unitary(n));
    CMatrix a = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = {0.0, spectrum[i]};
    const OrbitConfig config = make_orbit_config(alg, alg->from_matrix(a));
    Stream rng(7);
    Element v = config.m.basis() * rng.normal_vector(config.m.dim());
    chart = std::make_shared<const Chart>(config, TangentBundlePoint{config.a, v / v.norm()}, config.m);
    coords = rng.uniform_vector(chart->dim(), -0.1, 0.1);
    eta1 = invert_form(canonical_form_field(chart), chart->dim());
    eta2 = invert_form(omega2_field(chart), chart->dim());
  }
};

const Fixture& cp2() {
  static const Fixture f(3, {2.0, -1.0, -1.0});
  return f;
}

const Fixture& flag3() {
  static const Fixture f(3, {1.0, 2.0, -3.0});
  return f;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_CanonicalForm(benchmark::State& state) {
  const Fixture& f = flag3();
  for (auto _ : state) benchmark::DoNotOptimize(canonical_form_matrix(*f.chart, f.coords, kDefaultFdStep, mode(state)));
}

void BM_Closedness(benchmark::State& state) {
  const Fixture& f = flag3();
  const FormField w = omega2_field(f.chart);
  for (auto _ : state) benchmark::DoNotOptimize(closedness_residual(w, f.coords, kDefaultFdStep, mode(state)));
}

void BM_JacobiCP2(benchmark::State& state) {
  const Fixture& f = cp2();
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_residual(f.eta2, f.coords, kDefaultFdStep, mode(state)));
}

void BM_CompatibilityFlag(benchmark::State& state) {
  const Fixture& f = flag3();
  for (auto _ : state)
    benchmark::DoNotOptimize(compatibility_residual(f.eta1, f.eta2, f.coords, kDefaultFdStep, mode(state)));
}

// The pipeline shape: one sampled loop over points, serial kernels inside.
void BM_PointLoop(benchmark::State& state) {
  const Fixture& f = cp2();
  std::vector<Vector> points;
  for (int i = 0; i < 16; ++i) points.push_back(Stream(11, "bench-points", i).uniform_vector(f.chart->dim(), -0.1, 0.1));
  for (auto _ : state) {
    const auto r = sample_map<double>(mode(state), static_cast<int>(points.size()),
                                      [&](int i) { return jacobi_residual(f.eta1, points[i]); });
    benchmark::DoNotOptimize(ordered_max(r));
  }
}

}  // namespace

BENCHMARK(BM_CanonicalForm)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Closedness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiCP2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompatibilityFlag)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PointLoop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
