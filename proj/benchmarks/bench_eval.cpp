#include <benchmark/benchmark.h>

#include "parfrac/action.hpp"
#include "parfrac/cli.hpp"
#include "parfrac/dense.hpp"
#include "parfrac/methods.hpp"

namespace {

using namespace parfrac;

void BM_EvalDense(benchmark::State& state) {
  const int workers = int(state.range(0));
  DenseMatrix b = make_dense_matrix({MatrixSpec::Kind::Randn, 80, 9});
  b.scale(0.7 / b.one_norm());
  const FractionMethod& m = catalog("R8");
  for (auto _ : state) {
    DenseMatrix r = eval_dense(m, b, {.workers = workers});
    benchmark::DoNotOptimize(r.data().data());
  }
}
BENCHMARK(BM_EvalDense)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_ActionEval(benchmark::State& state) {
  const int workers = int(state.range(0));
  TridiagMatrix a = TridiagMatrix::trid121(20000);
  const double s = 1.5 / a.one_norm();
  for (auto& e : a.sub) e *= s;
  for (auto& e : a.diag) e *= s;
  for (auto& e : a.super) e *= s;
  std::vector<double> v = random_unit_vector(a.d, 11);
  const FractionMethod& m = catalog("R10star");
  for (auto _ : state) {
    auto r = action_eval(m, a, v, {.workers = workers});
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * a.d);
}
BENCHMARK(BM_ActionEval)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_TaylorAction(benchmark::State& state) {
  TridiagMatrix a = TridiagMatrix::trid121(20000);
  const double s = 1.5 / a.one_norm();
  for (auto& e : a.sub) e *= s;
  for (auto& e : a.diag) e *= s;
  for (auto& e : a.super) e *= s;
  std::vector<double> v = random_unit_vector(a.d, 11);
  for (auto _ : state) {
    auto r = taylor_action(10, a, v);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * a.d);
}
BENCHMARK(BM_TaylorAction);

void BM_ExpmOracle(benchmark::State& state) {
  DenseMatrix b = make_dense_matrix({MatrixSpec::Kind::Randn, 40, 13});
  b.scale(1.0 / b.one_norm());
  for (auto _ : state) {
    HpDenseMatrix e = expm_oracle(b, 40);
    benchmark::DoNotOptimize(&e);
  }
}
BENCHMARK(BM_ExpmOracle);

}  // namespace
