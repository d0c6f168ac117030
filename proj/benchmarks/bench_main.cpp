#include <benchmark/benchmark.h>

#include <cmath>

#include "hardycert/hardycert.hpp"

using namespace hardycert;

namespace {

PiecewisePower one() { return PiecewisePower::constant(1.0); }

PiecewisePower two_piece(double e0, double e1) {
  return PiecewisePower({{0.0, 1.0, 1.0, e0}, {1.0, kInf, 1.0, e1}});
}

ProblemInstance canonical() {
  return ProblemInstance(one(), PiecewisePower::power(1.0, 2.0), one(), 1.0, 1.0);
}

ProblemInstance steep() {
  return ProblemInstance(two_piece(0.0, -4.0), two_piece(0.0, 3.0), one(), 1.0, 0.5);
}

AtomicFunction atoms(int n) {
  std::vector<Atom> a;
  for (int j = 0; j < n; ++j) a.push_back({std::pow(10.0, -3.0 + 6.0 * (j + 0.5) / n), 1.0 / (j + 1)});
  return AtomicFunction(a);
}

}  // namespace

static void BM_Envelope(benchmark::State& state) {
  const PiecewisePower f({{0.0, 0.5, 2.0, 0.3}, {0.5, 3.0, 1.0, -1.5}, {3.0, 20.0, 0.5, 2.0},
                          {20.0, kInf, 4.0, -0.7}});
  for (auto _ : state) benchmark::DoNotOptimize(f.envelope(Direction::up));
}
BENCHMARK(BM_Envelope);

static void BM_CriteriaCanonical(benchmark::State& state) {
  const auto p = canonical();
  for (auto _ : state) benchmark::DoNotOptimize(criteria_constant(p).aggregate);
}
BENCHMARK(BM_CriteriaCanonical)->Unit(benchmark::kMillisecond);

static void BM_CriteriaSteep(benchmark::State& state) {
  const auto p = steep();
  for (auto _ : state) benchmark::DoNotOptimize(criteria_constant(p).aggregate);
}
BENCHMARK(BM_CriteriaSteep)->Unit(benchmark::kMillisecond);

static void BM_LhsEval(benchmark::State& state) {
  const auto p = steep();
  const auto h = atoms(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lhs_eval(p, h));
}
BENCHMARK(BM_LhsEval)->Arg(1)->Arg(8)->Arg(64);

static void BM_DiracScan(benchmark::State& state) {
  const auto p = canonical();
  const GridSpec g{1e-6, 1e6, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dirac_scan(p, g).best_ratio);
}
BENCHMARK(BM_DiracScan)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_Ascent(benchmark::State& state) {
  const auto p = steep();
  for (auto _ : state) benchmark::DoNotOptimize(ascent_optimize(p, 16, 400, 1, 1).best_ratio);
}
BENCHMARK(BM_Ascent)->Unit(benchmark::kMillisecond);

static void BM_Covering(benchmark::State& state) {
  const auto u = two_piece(0.0, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(covering_sequence(u, -40, 40).points.size());
}
BENCHMARK(BM_Covering);
BENCHMARK_MAIN();
