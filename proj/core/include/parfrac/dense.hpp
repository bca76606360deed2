#pragma once

#include <optional>
#include <span>
#include <vector>

#include "parfrac/highprec.hpp"
#include "parfrac/methods.hpp"

namespace parfrac {

/// Square row-major double-precision matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int dim) : d_(dim), a_(size_t(dim) * size_t(dim), 0.0) {}

  static DenseMatrix identity(int dim);

  int dim() const { return d_; }
  double& at(int i, int j) { return a_[size_t(i) * size_t(d_) + size_t(j)]; }
  double at(int i, int j) const { return a_[size_t(i) * size_t(d_) + size_t(j)]; }
  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  DenseMatrix mul(const DenseMatrix& o) const;
  std::vector<double> matvec(std::span<const double> v) const;
  void axpy(double s, const DenseMatrix& x);  // this += s x
  void add_scaled_identity(double s);
  void scale(double s);

  double one_norm() const;  // max column sum
  double max_abs() const;

 private:
  int d_ = 0;
  std::vector<double> a_;
};

/// Approximate spectral norm by power iteration on M^T M; deterministic
/// start vector and iteration count.
double two_norm_est(const DenseMatrix& m, int iterations = 120);

/// LU factors of a square matrix with partial pivoting, reusable across
/// multiple right-hand sides.
class DenseLu {
 public:
  /// Factors A. Throws SingularShift when a pivot falls below
  /// pivot_rel_tol * max|A_ij| (absolute floor for an all-zero matrix).
  DenseLu(const DenseMatrix& a, double pivot_rel_tol = 1e-14);

  std::vector<double> solve(std::span<const double> rhs) const;
  DenseMatrix solve_matrix(const DenseMatrix& rhs) const;

 private:
  int d_ = 0;
  std::vector<double> lu_;
  std::vector<int> piv_;
};

/// (I - cB)^{-1} by LU with d right-hand sides.
DenseMatrix solve_shifted(const DenseMatrix& b, double c);

struct EvalOptions {
  int workers = 1;
  bool fixed_order = true;  // reduction always in ascending shift index
  std::optional<EvalForm> form;  // overrides the method's own form when set
};

/// r(B) = d_0 I + d_1 B + d_2 B^2 + sum_i b_i (I - c_i B)^{-1}, each fraction
/// term solved independently (in parallel up to opts.workers), accumulated in
/// ascending shift order and then the polynomial part. Residual form follows
/// the a_0 + sum b_i c_i B (I - c_i B)^{-1} rewrite.
DenseMatrix eval_dense(const FractionMethod& method, const DenseMatrix& b,
                       const EvalOptions& opts = {});

/// Baselines.
DenseMatrix pade4(const DenseMatrix& b);
DenseMatrix pade4_phi1(const DenseMatrix& b);
DenseMatrix taylor8(const DenseMatrix& b);
DenseMatrix pade10(const DenseMatrix& b);

/// Square matrix of BigFloat entries at a fixed precision.
class HpDenseMatrix {
 public:
  HpDenseMatrix(int dim, int prec_bits);
  static HpDenseMatrix identity(int dim, int prec_bits);
  static HpDenseMatrix from(const DenseMatrix& m, int prec_bits);

  int dim() const { return d_; }
  int prec_bits() const { return prec_; }
  BigFloat& at(int i, int j) { return a_[size_t(i) * size_t(d_) + size_t(j)]; }
  const BigFloat& at(int i, int j) const { return a_[size_t(i) * size_t(d_) + size_t(j)]; }

  HpDenseMatrix mul(const HpDenseMatrix& o) const;
  void axpy(const BigFloat& s, const HpDenseMatrix& x);
  void add_scaled_identity(const BigFloat& s);
  void scale_pow2(long e);  // exact multiply by 2^e
  double one_norm_d() const;
  DenseMatrix to_double() const;

 private:
  int d_ = 0, prec_ = 0;
  std::vector<BigFloat> a_;
};

/// e^B by scaling and squaring of a Paterson-Stockmeyer Taylor sum, computed
/// at >= `digits` decimal digits (squaring count keeps the scaled norm
/// <= 1/4). digits >= 30.
HpDenseMatrix expm_oracle(const DenseMatrix& b, int digits);

/// phi_1(B) = (e^B - I) B^{-1} summed directly from its Taylor series; valid
/// for moderate norms (the series is entire, precision carries guard digits
/// proportional to the norm).
HpDenseMatrix phi1_oracle(const DenseMatrix& b, int digits);

/// Two-norm of (oracle - approx), differenced in high precision.
double error_vs_oracle(const HpDenseMatrix& oracle, const DenseMatrix& approx);

}  // namespace parfrac
