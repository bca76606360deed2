#include <benchmark/benchmark.h>

#include "parfrac/bounds.hpp"
#include "parfrac/methods.hpp"

namespace {

using namespace parfrac;

void BM_SolveWeights(benchmark::State& state) {
  const int order = int(state.range(0));
  std::vector<Rational> shifts;
  for (int i = 0; i <= order; ++i) shifts.push_back(Rational(1, i + 2));
  CoeffSeries series(FunctionId::exp());
  for (auto _ : state) {
    auto w = solve_weights(shifts, series, order);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_SolveWeights)->Arg(4)->Arg(8)->Arg(12);

void BM_BuildHybrid(benchmark::State& state) {
  std::vector<Rational> shifts;
  for (int i = 1; i <= 10; ++i) shifts.push_back(Rational(1, 6 + i));
  std::map<int, Rational> free{{9, Rational(-50000)}, {10, Rational(350000)}};
  CoeffSeries series(FunctionId::exp());
  for (auto _ : state) {
    FractionMethod m = build_hybrid(shifts, free, series, 10, "bench");
    benchmark::DoNotOptimize(&m);
  }
}
BENCHMARK(BM_BuildHybrid);

void BM_ForwardBound(benchmark::State& state) {
  ErrorProfile p = ErrorProfile::for_method(catalog("R10star"), CoeffSeries(FunctionId::exp()));
  for (auto _ : state) {
    double b = p.forward_bound(1.5);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_ForwardBound);

void BM_ThetaSolve(benchmark::State& state) {
  CoeffSeries series(FunctionId::exp());
  for (auto _ : state) {
    // fresh profile each round so the theta memo does not short circuit
    ErrorProfile p = ErrorProfile::for_method(catalog("R5"), series);
    double t = p.theta(5.9604644775390625e-8).theta;
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_ThetaSolve);

}  // namespace
