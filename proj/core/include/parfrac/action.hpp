#pragma once

#include <span>
#include <string>
#include <vector>

#include "parfrac/dense.hpp"
#include "parfrac/methods.hpp"

namespace parfrac {

/// Compact three-diagonal matrix.
struct TridiagMatrix {
  int d = 0;
  std::vector<double> sub, diag, super;  // lengths d-1, d, d-1

  static TridiagMatrix zero(int dim);
  /// trid{-1, 2, -1}
  static TridiagMatrix trid121(int dim);

  std::vector<double> matvec(std::span<const double> v) const;
  DenseMatrix to_dense() const;
  double one_norm() const;
};

/// Approximate spectral norm by power iteration on T^T T.
double two_norm_est(const TridiagMatrix& t, int iterations = 200);

/// Thomas algorithm: forward elimination and back substitution, the 8d-flop
/// pattern. Throws ZeroPivot (with the failing row) below the 1e-300 floor.
std::vector<double> thomas_solve(const TridiagMatrix& t, std::span<const double> rhs);

/// Thomas factorization kept for reuse when one shifted system is applied to
/// many vectors.
class TridiagFactor {
 public:
  explicit TridiagFactor(const TridiagMatrix& t);
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  int d_ = 0;
  std::vector<double> mult_, diag_, super_;
};

/// Compact five-diagonal matrix; solved by banded LU without pivoting
/// (the 15d-flop pattern).
struct PentadiagMatrix {
  int d = 0;
  std::vector<double> sub2, sub1, diag, super1, super2;

  std::vector<double> matvec(std::span<const double> v) const;
  DenseMatrix to_dense() const;
};

std::vector<double> pentadiag_solve(const PentadiagMatrix& p, std::span<const double> rhs);

/// r(A) v via shifted tridiagonal solves; one Thomas solve per nonzero shift,
/// executed in parallel up to opts.workers, accumulated in ascending shift
/// order and then the polynomial part. Residual form solves
/// (I - c_i A) v_i = c_i A v and assembles a_0 v + d_1 Av + d_2 A^2 v + sum b_i v_i.
std::vector<double> action_eval(const FractionMethod& method, const TridiagMatrix& a,
                                std::span<const double> v, const EvalOptions& opts = {});

/// N-fold substepping: v <- r(A/N) v repeated N times.
std::vector<double> substep_action(const FractionMethod& method, const TridiagMatrix& a,
                                   std::span<const double> v, int substeps,
                                   const EvalOptions& opts = {});

/// One method bound to one matrix, with the per-shift Thomas factorizations
/// computed once and reused read-only across vectors. apply() performs the
/// same floating-point operations as action_eval, so results are identical.
class ActionOperator {
 public:
  ActionOperator(const FractionMethod& method, const TridiagMatrix& a);

  std::vector<double> apply(std::span<const double> v, const EvalOptions& opts = {}) const;

 private:
  FractionMethod method_;
  TridiagMatrix a_;
  std::vector<TridiagFactor> factors_;  // one per nonzero shift, in shift order
};

/// Degree-m Taylor polynomial action sum_{k<=m} A^k v / k! by the iterated
/// matvec recurrence; costs m matvecs.
std::vector<double> taylor_action(int degree, const TridiagMatrix& a, std::span<const double> v);

/// Flop model per banded width: tridiagonal (5d matvec, 8d solve),
/// pentadiagonal (9d, 15d). Costs are reported in matvec-equivalents m*.
struct CostModel {
  double matvec_per_d = 5;
  double solve_per_d = 8;

  static CostModel tridiagonal() { return {5, 8}; }
  static CostModel pentadiagonal() { return {9, 15}; }

  double matvec_flops(int d) const { return matvec_per_d * d; }
  double solve_flops(int d) const { return solve_per_d * d; }
};

struct SelectionPlan {
  std::string method;      // chosen catalog method id
  int substeps = 1;        // N
  double serial_cost = 0;  // matvec-equivalents, all shifts on one processor
  double parallel_cost = 0;  // matvec-equivalents, one shift per processor
};

struct SelectorOptions {
  /// Select R10 (smaller coefficients, lower round-off plateau) instead of
  /// R10star (larger theta) for the high-order slot.
  bool prefer_small_coefficients = false;
  CostModel cost = CostModel::tridiagonal();
};

/// Cheapest method whose theta threshold covers `norm` at tolerance `tol`;
/// beyond the largest theta, substeps with the high-order method.
SelectionPlan select_method(double norm, double tol, const SelectorOptions& opts = {});

struct CostCurveRow {
  double norm = 0;
  double taylor_cost = 0;     // degree-{5,10,15} ladder
  double frac_serial = 0;     // fractional family, serial
  double frac_parallel = 0;   // fractional family, ideal parallel
};

std::vector<CostCurveRow> cost_curve(std::span<const double> norms, double tol,
                                     const SelectorOptions& opts = {});

/// High-precision e^A v by substepped Taylor summation.
std::vector<BigFloat> action_oracle(const TridiagMatrix& a, std::span<const double> v, int digits);

/// Two-norm of (oracle - approx) for vectors.
double error_vs_oracle(std::span<const BigFloat> oracle, std::span<const double> approx);

}  // namespace parfrac
