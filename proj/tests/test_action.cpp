#include <doctest.h>

#include <cmath>

#include "parfrac/action.hpp"
#include "parfrac/bounds.hpp"
#include "parfrac/cli.hpp"
#include "parfrac/error.hpp"
#include "parfrac/rng.hpp"

using namespace parfrac;

namespace {

const double kTol24 = 5.9604644775390625e-8;

TridiagMatrix random_tridiag(int d, std::uint64_t seed, double one_norm_target) {
  NormalSampler normal(seed);
  TridiagMatrix t = TridiagMatrix::zero(d);
  for (auto& e : t.sub) e = normal.next();
  for (auto& e : t.diag) e = normal.next();
  for (auto& e : t.super) e = normal.next();
  double s = one_norm_target / t.one_norm();
  for (auto& e : t.sub) e *= s;
  for (auto& e : t.diag) e *= s;
  for (auto& e : t.super) e *= s;
  return t;
}

double vec_norm(std::span<const double> v) {
  double acc = 0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc);
}

double vec_diff_rel(std::span<const double> a, std::span<const double> b) {
  double diff = 0, scale = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    scale += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(scale), 1e-300);
}

}  // namespace

TEST_SUITE_BEGIN("action");

TEST_CASE("thomas solve") {
  // identity: x = v
  TridiagMatrix eye = TridiagMatrix::zero(5);
  std::fill(eye.diag.begin(), eye.diag.end(), 1.0);
  std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(thomas_solve(eye, v) == v);

  // trid{-1,2,-1} d=5, rhs e_1, against the dense LU
  TridiagMatrix t = TridiagMatrix::trid121(5);
  std::vector<double> e1{1, 0, 0, 0, 0};
  std::vector<double> x = thomas_solve(t, e1);
  DenseLu lu(t.to_dense());
  std::vector<double> xd = lu.solve(e1);
  CHECK(vec_diff_rel(x, xd) <= 1e-13);

  // large system: relative residual below 1e-12
  const int d = 1000;
  TridiagMatrix big = TridiagMatrix::trid121(d);
  std::vector<double> rhs = random_unit_vector(d, 17);
  std::vector<double> sol = thomas_solve(big, rhs);
  std::vector<double> back = big.matvec(sol);
  double res = 0;
  for (int i = 0; i < d; ++i)
    res += (back[size_t(i)] - rhs[size_t(i)]) * (back[size_t(i)] - rhs[size_t(i)]);
  CHECK(std::sqrt(res) / vec_norm(rhs) <= 1e-12);

  // zero pivot reported with its row
  TridiagMatrix z = TridiagMatrix::zero(3);
  try {
    thomas_solve(z, std::vector<double>{1, 1, 1});
    FAIL("expected ZeroPivot");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroPivot);
  }
}

TEST_CASE("thomas factorization reuse matches the one shot solver exactly") {
  TridiagMatrix t = random_tridiag(200, 23, 1.0);
  for (int i = 0; i < 200; ++i) t.diag[size_t(i)] += 4.0;  // diagonally dominant
  TridiagFactor factor(t);
  for (std::uint64_t s = 0; s < 4; ++s) {
    std::vector<double> rhs = random_unit_vector(200, 100 + s);
    CHECK(factor.solve(rhs) == thomas_solve(t, rhs));
  }
}

TEST_CASE("pentadiagonal solve against dense LU") {
  const int d = 120;
  NormalSampler normal(31);
  PentadiagMatrix p;
  p.d = d;
  p.sub2.resize(size_t(d - 2));
  p.sub1.resize(size_t(d - 1));
  p.diag.resize(size_t(d));
  p.super1.resize(size_t(d - 1));
  p.super2.resize(size_t(d - 2));
  for (auto& e : p.sub2) e = normal.next();
  for (auto& e : p.sub1) e = normal.next();
  for (auto& e : p.diag) e = normal.next() + 8.0;  // keep pivots healthy
  for (auto& e : p.super1) e = normal.next();
  for (auto& e : p.super2) e = normal.next();

  std::vector<double> rhs = random_unit_vector(d, 37);
  std::vector<double> x = pentadiag_solve(p, rhs);
  DenseLu lu(p.to_dense());
  CHECK(vec_diff_rel(x, lu.solve(rhs)) <= 1e-12);

  PentadiagMatrix zero;
  zero.d = 2;
  zero.sub1.assign(1, 0.0);
  zero.diag.assign(2, 0.0);
  zero.super1.assign(1, 0.0);
  CHECK_THROWS_AS(pentadiag_solve(zero, std::vector<double>{1, 1}), Error);
}

TEST_CASE("action matches the densified evaluator") {
  const int d = 50;
  TridiagMatrix a = random_tridiag(d, 41, 1.2);
  DenseMatrix dense = a.to_dense();
  std::vector<double> v = random_unit_vector(d, 43);

  // Thomas and pivoted LU round differently per solve; the discrepancy is
  // amplified by sum|b_i|, so the order-10 sets cannot agree to 1e-12 in
  // doubles (max coefficient 4.7e4 and 4.9e6).
  auto tolerance = [](const FractionMethod& m) {
    return std::max(1e-12, 100 * to_double_nearest(m.max_coefficient()) * 2.23e-16);
  };
  for (const char* name : {"R4", "R5", "R8", "R10", "R10star"}) {
    const FractionMethod& m = catalog(name);
    std::vector<double> by_action = action_eval(m, a, v);
    std::vector<double> by_dense = eval_dense(m, dense).matvec(v);
    CHECK(vec_diff_rel(by_action, by_dense) <= tolerance(m));

    FractionMethod res = to_residual_form(m);
    std::vector<double> ra = action_eval(res, a, v);
    std::vector<double> rd = eval_dense(res, dense).matvec(v);
    CHECK(vec_diff_rel(ra, rd) <= tolerance(m));
  }
}

TEST_CASE("action on the zero matrix returns a_0 v") {
  TridiagMatrix zero = TridiagMatrix::zero(7);
  std::vector<double> v = random_unit_vector(7, 47);
  for (const char* name : {"R4", "R10"}) {
    std::vector<double> out = action_eval(catalog(name), zero, v);
    // a_0 = 1 up to the rounded-coefficient cancellation
    CHECK(vec_diff_rel(out, v) <= 1e-9);
  }
}

TEST_CASE("action determinism across workers") {
  TridiagMatrix a = TridiagMatrix::trid121(300);
  std::vector<double> v = random_unit_vector(300, 53);
  const FractionMethod& r10 = catalog("R10star");
  std::vector<double> w1 = action_eval(r10, a, v, {.workers = 1});
  std::vector<double> w2 = action_eval(r10, a, v, {.workers = 2});
  std::vector<double> w8 = action_eval(r10, a, v, {.workers = 8});
  CHECK(w1 == w2);
  CHECK(w1 == w8);
  CHECK_THROWS_AS(action_eval(r10, a, v, {.fixed_order = false}), Error);
}

TEST_CASE("reusable operator gives identical results across many vectors") {
  TridiagMatrix a = TridiagMatrix::trid121(400);
  const double s = 1.0 / a.one_norm();
  for (auto& e : a.sub) e *= s;
  for (auto& e : a.diag) e *= s;
  for (auto& e : a.super) e *= s;
  for (const char* name : {"R5", "R10"}) {
    ActionOperator op(catalog(name), a);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::vector<double> v = random_unit_vector(400, 500 + seed);
      CHECK(op.apply(v) == action_eval(catalog(name), a, v));
    }
  }
  // residual form goes through the same factorizations
  ActionOperator op(to_residual_form(catalog("R10")), a);
  std::vector<double> v = random_unit_vector(400, 900);
  CHECK(op.apply(v) == action_eval(to_residual_form(catalog("R10")), a, v));
}

TEST_CASE("taylor action") {
  TridiagMatrix zero = TridiagMatrix::zero(4);
  std::vector<double> v{1, -2, 0.5, 3};
  CHECK(taylor_action(5, zero, v) == v);

  // diagonal matrix: per-entry scalar Taylor sums
  TridiagMatrix diag = TridiagMatrix::zero(3);
  diag.diag = {0.3, -0.7, 1.1};
  std::vector<double> ones{1, 1, 1};
  std::vector<double> out = taylor_action(8, diag, ones);
  for (int i = 0; i < 3; ++i) {
    double expect = 1, term = 1;
    for (int k = 1; k <= 8; ++k) {
      term = term * diag.diag[size_t(i)] / k;
      expect += term;
    }
    CHECK(out[size_t(i)] == doctest::Approx(expect).epsilon(1e-14));
  }

  // degree 10 on trid{-1,2,-1} d=50 scaled to ||A||_1 = 0.8: error under the
  // Taylor remainder bound
  TridiagMatrix t = TridiagMatrix::trid121(50);
  const double s = 0.8 / t.one_norm();
  for (auto& e : t.sub) e *= s;
  for (auto& e : t.diag) e *= s;
  for (auto& e : t.super) e *= s;
  std::vector<double> u = random_unit_vector(50, 59);
  std::vector<double> approx = taylor_action(10, t, u);
  std::vector<BigFloat> oracle = action_oracle(t, u, 40);
  double err = error_vs_oracle(oracle, approx);
  ErrorProfile remainder = ErrorProfile::taylor(10, CoeffSeries(FunctionId::exp()));
  CHECK(err <= remainder.forward_bound(0.8));
}

TEST_CASE("tenth order action under the single precision budget") {
  // trid{-1,2,-1} at the table thresholds: error within 10x of 2^-24
  const int d = 100;
  TridiagMatrix base = TridiagMatrix::trid121(d);
  std::vector<double> v = random_unit_vector(d, 73);
  struct Case {
    const char* name;
    double h_norm1;  // target ||hA||_1, inside the method's own theta
  } cases[] = {{"R10star", 1.7}, {"R10", 1.3}};
  for (const Case& c : cases) {
    TridiagMatrix a = base;
    const double s = c.h_norm1 / base.one_norm();
    for (auto& e : a.sub) e *= s;
    for (auto& e : a.diag) e *= s;
    for (auto& e : a.super) e *= s;
    std::vector<BigFloat> oracle = action_oracle(a, v, 40);
    double err = error_vs_oracle(oracle, action_eval(catalog(c.name), a, v));
    CHECK(err <= 10 * kTol24);
  }
}

TEST_CASE("method selection intervals") {
  SelectionPlan r5 = select_method(0.25, kTol24);
  CHECK(r5.method == "R5");
  CHECK(r5.substeps == 1);
  CHECK(r5.serial_cost == 8.0);
  CHECK(r5.parallel_cost == 8.0 / 5.0);

  SelectionPlan r10 = select_method(1.5, kTol24);
  CHECK(r10.method == "R10star");
  CHECK(r10.substeps == 1);
  CHECK(r10.serial_cost == 18.0);
  CHECK(r10.parallel_cost == 2.0);

  SelectionPlan zero = select_method(0.0, kTol24);
  CHECK(zero.method == "R5");
  CHECK(zero.substeps == 1);

  SelectionPlan deep = select_method(3.6, kTol24);  // beyond theta_10 = 1.734
  CHECK(deep.method == "R10star");
  CHECK(deep.substeps == 3);
  CHECK(deep.serial_cost == 3 * 18.0);
  CHECK(deep.parallel_cost == 3 * 2.0);

  SelectionPlan small = select_method(1.2, kTol24, {.prefer_small_coefficients = true});
  CHECK(small.method == "R10");
  CHECK(small.substeps == 1);
}

TEST_CASE("cost curve steps at the computed thresholds") {
  double t5 = theta_taylor(5, kTol24);
  double t10 = theta_taylor(10, kTol24);
  double t15 = theta_taylor(15, kTol24);
  CoeffSeries exp_series(FunctionId::exp());
  double r5 = theta(catalog("R5"), exp_series, kTol24).theta;
  double r10 = theta(catalog("R10star"), exp_series, kTol24).theta;

  std::vector<double> norms{0.1, 1.2};
  auto rows = cost_curve(norms, kTol24);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].taylor_cost == 5.0);
  CHECK(rows[0].frac_serial == 8.0);
  CHECK(rows[0].frac_parallel == 8.0 / 5.0);
  CHECK(rows[1].taylor_cost == 15.0);  // 1.073 < 1.2 <= 2.382
  CHECK(rows[1].frac_serial == 18.0);  // 0.298 < 1.2 <= 1.734
  CHECK(rows[1].frac_parallel == 2.0);

  // breakpoints sit exactly at the computed theta values
  for (double t : {t5, t10, t15}) {
    auto lo = cost_curve(std::vector<double>{t * (1 - 1e-9)}, kTol24);
    auto hi = cost_curve(std::vector<double>{t * (1 + 1e-9)}, kTol24);
    CHECK(lo[0].taylor_cost < hi[0].taylor_cost);
  }
  for (double t : {r5, r10}) {
    auto lo = cost_curve(std::vector<double>{t * (1 - 1e-9)}, kTol24);
    auto hi = cost_curve(std::vector<double>{t * (1 + 1e-9)}, kTol24);
    CHECK(lo[0].frac_serial < hi[0].frac_serial);
  }

  CHECK(cost_curve({}, kTol24).empty());
}

TEST_CASE("substepping reaches larger norms") {
  const int d = 100;
  TridiagMatrix a = TridiagMatrix::trid121(d);
  const double target = 3.0;  // h ||A||_1, beyond theta_10
  const double s = target / a.one_norm();
  for (auto& e : a.sub) e *= s;
  for (auto& e : a.diag) e *= s;
  for (auto& e : a.super) e *= s;
  std::vector<double> v = random_unit_vector(d, 61);

  SelectionPlan plan = select_method(target, kTol24);
  REQUIRE(plan.substeps >= 2);
  std::vector<double> approx = substep_action(catalog(plan.method), a, v, plan.substeps);
  std::vector<BigFloat> oracle = action_oracle(a, v, 40);
  double err = error_vs_oracle(oracle, approx);

  CoeffSeries exp_series(FunctionId::exp());
  double per_step = forward_bound(catalog(plan.method), exp_series, target / plan.substeps);
  // error growth: N steps, each amplified by at most ~||e^A||
  double oracle_norm = 0;
  for (const auto& e : oracle) oracle_norm += e.get_d() * e.get_d();
  oracle_norm = std::sqrt(oracle_norm);
  CHECK(err <= plan.substeps * per_step * std::max(1.0, oracle_norm) * 10);
}

TEST_CASE("high precision action oracle") {
  TridiagMatrix zero = TridiagMatrix::zero(4);
  std::vector<double> v{0.5, -1, 2, 0};
  std::vector<BigFloat> at_zero = action_oracle(zero, v, 40);
  for (int i = 0; i < 4; ++i) CHECK(at_zero[size_t(i)].get_d() == v[size_t(i)]);

  // diagonal: entrywise e^lambda v
  TridiagMatrix diag = TridiagMatrix::zero(3);
  diag.diag = {0.4, -0.9, 1.7};
  std::vector<double> ones{1, 1, 1};
  std::vector<BigFloat> out = action_oracle(diag, ones, 40);
  for (int i = 0; i < 3; ++i)
    CHECK(out[size_t(i)].get_d() == doctest::Approx(std::exp(diag.diag[size_t(i)])).epsilon(1e-14));

  // cross check against the dense oracle
  const int d = 40;
  TridiagMatrix t = random_tridiag(d, 67, 1.5);
  std::vector<double> u = random_unit_vector(d, 71);
  std::vector<BigFloat> fast = action_oracle(t, u, 40);
  HpDenseMatrix em = expm_oracle(t.to_dense(), 40);
  BigFloat worst(0, 256);
  for (int i = 0; i < d; ++i) {
    BigFloat acc(0, em.prec_bits());
    for (int j = 0; j < d; ++j) acc += em.at(i, j) * u[size_t(j)];
    BigFloat diff(0, 256);
    diff = abs(acc - fast[size_t(i)]);
    if (diff > worst) worst = diff;
  }
  CHECK(worst.get_d() <= 1e-25);
}

TEST_SUITE_END();
