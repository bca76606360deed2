#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "parfrac/rational.hpp"
#include "parfrac/series.hpp"

namespace parfrac {

/// How an approximant is evaluated. Residual form rewrites each fraction as
/// 1/(1-cx) = 1 + cx/(1-cx), pulling the constant a_0 out front; it is the
/// same function with smaller round-off when |cx| is small.
enum class EvalForm { Plain, Residual };

/// One partial-fraction approximant
///   r(x) = d_0 + d_1 x + d_2 x^2 + sum_i b_i / (1 - c_i x)
/// matching the target Taylor series through x^order. `poly` is empty for
/// pure fraction methods and has exactly three entries for hybrid ones.
struct FractionMethod {
  std::string name;
  FunctionId function = FunctionId::exp();
  std::vector<Rational> shifts;   // c_i, pairwise distinct, at most one zero
  std::vector<Rational> weights;  // b_i
  std::vector<Rational> poly;     // d_0, d_1, d_2 (size 0 or 3)
  int order = 0;                  // s
  EvalForm form = EvalForm::Plain;
  std::vector<std::string> notes;  // catalog cross-check diagnostics

  /// Number of fraction terms that require a linear solve (nonzero shifts).
  int processors() const;

  /// alpha_k = d_k + sum_i b_i c_i^k, with 0^0 = 1.
  Rational taylor_coeff(int k) const;

  /// Constant term a_0 = d_0 + sum_i b_i; used by the residual form.
  Rational constant_term() const;

  /// max over {|b_i|, |d_k|}
  Rational max_coefficient() const;

  /// 1/max_i |c_i|; the scalar convergence radius of the fraction terms.
  /// Unbounded (returns 0 meaning "none") when all shifts are zero.
  Rational max_abs_shift() const;
};

/// Solves the moment system sum_i b_i c_i^k = a_k, k = 0..order, exactly by
/// rational Gaussian elimination with partial pivoting. Requires
/// shifts.size() == order + 1 and pairwise distinct shifts.
std::vector<Rational> solve_weights(std::span<const Rational> shifts, const CoeffSeries& series,
                                    int order);

/// Pure fraction method: weights from solve_weights, no polynomial part.
/// Sum rules are re-verified before returning.
FractionMethod build_plain(std::span<const Rational> shifts, const CoeffSeries& series, int order,
                           std::string name);

/// Hybrid method with quadratic polynomial part. `free_weights` maps 1-based
/// weight indices to fixed values; the remaining order-2 weights solve
/// sum_i b_i c_i^k = a_k for k = 3..order, then d_k = a_k - sum_i b_i c_i^k
/// for k = 0,1,2. Shifts must be nonzero and pairwise distinct.
FractionMethod build_hybrid(std::span<const Rational> shifts,
                            const std::map<int, Rational>& free_weights,
                            const CoeffSeries& series, int order, std::string name);

/// Published method sets: R4, R4_phi1, R5, R8, R10star, R10. Each entry is
/// recomputed from its defining shifts at first use and cross-checked against
/// the transcribed constants; on mismatch the recomputed values win and a
/// diagnostic is recorded in `notes`.
const FractionMethod& catalog(std::string_view name);
std::vector<std::string> catalog_names();

/// Same function, evaluated via the residual rewrite (or back to plain).
FractionMethod to_residual_form(const FractionMethod& method);
FractionMethod to_plain_form(const FractionMethod& method);

/// alpha_0..alpha_{k_max}, exact.
std::vector<Rational> taylor_expansion_of_method(const FractionMethod& method, int k_max);

/// Family of shift patterns parameterized by alpha > 0.
struct MethodTemplate {
  std::string name;
  std::function<std::vector<Rational>(const Rational& alpha)> shift_pattern;
};

/// (0, 1/a, -1/a, 1/(2a), -1/(2a)): the four-processor pattern.
MethodTemplate frac4_template();
/// (0, 1/a, -1/a, 2/(3a), -2/(3a), 1/(2a), -1/(2a), 2/(5a), -2/(5a)).
MethodTemplate frac8_template();

struct AlphaScanResult {
  Rational alpha;
  FractionMethod method;
  double theta = 0;
};

/// Grid scan maximizing the theta threshold at `tol`; ties break toward the
/// smaller alpha (the grid is scanned in the order given).
AlphaScanResult optimize_alpha(const MethodTemplate& tmpl, const CoeffSeries& series, int order,
                               double tol, std::span<const Rational> alpha_grid);

/// Method card: the text serialization listing name, function, order,
/// processors, form, and every coefficient as "num/den" plus a
/// 17-significant-digit decimal.
std::string method_card(const FractionMethod& method);

/// Throws LengthMismatch if any sum rule d_k + sum b_i c_i^k = a_k fails for
/// k = 0..order.
void verify_sum_rules(const FractionMethod& method, const CoeffSeries& series);

}  // namespace parfrac
