#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "parfrac/action.hpp"
#include "parfrac/dense.hpp"
#include "parfrac/methods.hpp"

namespace parfrac {

/// Test matrix generators. `cauchy` is A_ij = 1/(1 + (i-j)^2); `trid121` is
/// trid{-1, 2, -1}; `randn` has iid standard normal entries from the seeded
/// generator.
struct MatrixSpec {
  enum class Kind { Randn, Cauchy, Trid121 };
  Kind kind = Kind::Randn;
  int dim = 100;
  std::uint64_t seed = 1;

  static Kind parse_kind(const std::string& name);
  static std::string kind_name(Kind kind);
};

DenseMatrix make_dense_matrix(const MatrixSpec& spec);
TridiagMatrix make_tridiag_matrix(const MatrixSpec& spec);

/// w ~ N(0, I), v = w / ||w||_2.
std::vector<double> random_unit_vector(int dim, std::uint64_t seed);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// One experiment sample.
struct BenchRecord {
  std::string method;
  double h_norm = 0;        // h * ||A||_2
  double error = 0;         // two-norm error vs the high-precision oracle
  double serial_cost = 0;   // matvec-equivalents (action) or product-equivalents (dense)
  double parallel_cost = 0;
};

struct BuildRequest {
  FunctionId function = FunctionId::exp();
  std::vector<Rational> shifts;          // explicit shifts, or:
  std::string template_name;             // "frac4" / "frac8" with `alpha`
  Rational alpha = 5;
  int order = 0;
  std::map<int, Rational> free_weights;  // non-empty selects the hybrid build
  std::string name = "custom";
};

/// Method card to a string (exact fractions + 17-digit decimals).
std::string cmd_build(const BuildRequest& request);

struct ThetaRequest {
  std::vector<std::string> methods;  // catalog names, taylor<m>, pade4, pade4_phi1
  std::vector<double> tols;
  std::vector<double> eps_grid;  // when non-empty, emit method,x,epsilon instead
};

/// CSV "method,tol,theta,theta_3dp,saturated" (tolerances rendered as exact
/// decimals), or "method,x,epsilon" in epsilon mode.
std::string cmd_theta(const ThetaRequest& request);

struct BenchRequest {
  MatrixSpec matrix;
  std::vector<std::string> methods;
  std::vector<double> h_norm_grid;  // defaults to 40 log points in [1e-2, 4]
  int workers = 1;
  int oracle_digits = 40;
};

/// CSV of BenchRecords for e^{hA} (and phi1(hA) for phi1 methods) on a dense
/// matrix. Method tokens: catalog names with an optional ":plain"/":residual"
/// suffix, plus baselines pade4, pade4_phi1, taylor8, pade10.
std::string cmd_bench_dense(const BenchRequest& request);

/// CSV of BenchRecords for e^{hA} v on the tridiagonal matrix. Tokens:
/// catalog names (optional form suffix) and taylor5/taylor10/taylor15.
std::string cmd_bench_action(const BenchRequest& request);

struct CostCurveRequest {
  std::vector<double> norms;
  double tol = 5.9604644775390625e-8;  // 2^-24
};

/// CSV "norm,taylor_cost,frac_serial_cost,frac_parallel_cost".
std::string cmd_cost_curve(const CostCurveRequest& request);

}  // namespace parfrac
