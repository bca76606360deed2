#include <benchmark/benchmark.h>

#include "parfrac/action.hpp"
#include "parfrac/cli.hpp"
#include "parfrac/dense.hpp"

namespace {

using namespace parfrac;

void BM_ThomasSolve(benchmark::State& state) {
  const int d = int(state.range(0));
  TridiagMatrix t = TridiagMatrix::trid121(d);
  std::vector<double> rhs = random_unit_vector(d, 5);
  for (auto _ : state) {
    auto x = thomas_solve(t, rhs);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_ThomasSolve)->Arg(1000)->Arg(100000);

void BM_ThomasFactorReuse(benchmark::State& state) {
  const int d = int(state.range(0));
  TridiagMatrix t = TridiagMatrix::trid121(d);
  TridiagFactor factor(t);
  std::vector<double> rhs = random_unit_vector(d, 5);
  for (auto _ : state) {
    auto x = factor.solve(rhs);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_ThomasFactorReuse)->Arg(1000)->Arg(100000);

void BM_PentadiagSolve(benchmark::State& state) {
  const int d = int(state.range(0));
  PentadiagMatrix p;
  p.d = d;
  p.sub2.assign(size_t(d - 2), -0.5);
  p.sub1.assign(size_t(d - 1), -1.0);
  p.diag.assign(size_t(d), 4.0);
  p.super1.assign(size_t(d - 1), -1.0);
  p.super2.assign(size_t(d - 2), -0.5);
  std::vector<double> rhs = random_unit_vector(d, 7);
  for (auto _ : state) {
    auto x = pentadiag_solve(p, rhs);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_PentadiagSolve)->Arg(1000)->Arg(100000);

void BM_DenseLuShifted(benchmark::State& state) {
  const int d = int(state.range(0));
  DenseMatrix b = make_dense_matrix({MatrixSpec::Kind::Randn, d, 3});
  b.scale(0.5 / b.one_norm());
  for (auto _ : state) {
    DenseMatrix x = solve_shifted(b, 0.2);
    benchmark::DoNotOptimize(x.data().data());
  }
}
BENCHMARK(BM_DenseLuShifted)->Arg(50)->Arg(100);

}  // namespace
