#include "parfrac/dense.hpp"

#include <algorithm>
#include <cmath>

#include "parfrac/error.hpp"
#include "worker_pool.hpp"

namespace parfrac {

DenseMatrix DenseMatrix::identity(int dim) {
  DenseMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::mul(const DenseMatrix& o) const {
  DenseMatrix out(d_);
  for (int i = 0; i < d_; ++i) {
    for (int k = 0; k < d_; ++k) {
      double aik = at(i, k);
      if (aik == 0.0) continue;
      const double* orow = &o.a_[size_t(k) * size_t(d_)];
      double* out_row = &out.a_[size_t(i) * size_t(d_)];
      for (int j = 0; j < d_; ++j) out_row[j] += aik * orow[j];
    }
  }
  return out;
}

std::vector<double> DenseMatrix::matvec(std::span<const double> v) const {
  std::vector<double> out(size_t(d_), 0.0);
  for (int i = 0; i < d_; ++i) {
    double acc = 0;
    const double* row = &a_[size_t(i) * size_t(d_)];
    for (int j = 0; j < d_; ++j) acc += row[j] * v[size_t(j)];
    out[size_t(i)] = acc;
  }
  return out;
}

void DenseMatrix::axpy(double s, const DenseMatrix& x) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += s * x.a_[i];
}

void DenseMatrix::add_scaled_identity(double s) {
  for (int i = 0; i < d_; ++i) at(i, i) += s;
}

void DenseMatrix::scale(double s) {
  for (auto& v : a_) v *= s;
}

double DenseMatrix::one_norm() const {
  double best = 0;
  for (int j = 0; j < d_; ++j) {
    double col = 0;
    for (int i = 0; i < d_; ++i) col += std::abs(at(i, j));
    best = std::max(best, col);
  }
  return best;
}

double DenseMatrix::max_abs() const {
  double best = 0;
  for (double v : a_) best = std::max(best, std::abs(v));
  return best;
}

double two_norm_est(const DenseMatrix& m, int iterations) {
  const int d = m.dim();
  if (d == 0) return 0;
  std::vector<double> v(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) v[size_t(i)] = 1.0 + double(i) / double(d);
  auto normalize = [](std::vector<double>& x) {
    double n = 0;
    for (double e : x) n += e * e;
    n = std::sqrt(n);
    if (n > 0)
      for (double& e : x) e /= n;
    return n;
  };
  normalize(v);
  double sigma = 0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> w = m.matvec(v);
    // v <- M^T w
    std::vector<double> u(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) {
      double wi = w[size_t(i)];
      if (wi == 0.0) continue;
      for (int j = 0; j < d; ++j) u[size_t(j)] += m.at(i, j) * wi;
    }
    double un = normalize(u);
    v.swap(u);
    sigma = std::sqrt(un);
    if (un == 0) break;
  }
  return sigma;
}

DenseLu::DenseLu(const DenseMatrix& a, double pivot_rel_tol) : d_(a.dim()), lu_(a.data().begin(), a.data().end()), piv_(size_t(a.dim())) {
  const int d = d_;
  const double scale = std::max(a.max_abs(), 1e-300);
  const double tol = pivot_rel_tol * scale;
  for (int col = 0; col < d; ++col) {
    int p = col;
    double best = std::abs(lu_[size_t(col) * size_t(d) + size_t(col)]);
    for (int r = col + 1; r < d; ++r) {
      double v = std::abs(lu_[size_t(r) * size_t(d) + size_t(col)]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best <= tol)
      raise(Errc::SingularShift, "singular system: pivot magnitude " + format_sig17(best) +
                                     " at column " + std::to_string(col) + " (scale " +
                                     format_sig17(scale) + ")");
    if (p != col)
      for (int j = 0; j < d; ++j)
        std::swap(lu_[size_t(p) * size_t(d) + size_t(j)], lu_[size_t(col) * size_t(d) + size_t(j)]);
    piv_[size_t(col)] = p;
    const double inv_piv = 1.0 / lu_[size_t(col) * size_t(d) + size_t(col)];
    for (int r = col + 1; r < d; ++r) {
      double f = lu_[size_t(r) * size_t(d) + size_t(col)] * inv_piv;
      lu_[size_t(r) * size_t(d) + size_t(col)] = f;
      if (f == 0.0) continue;
      for (int j = col + 1; j < d; ++j)
        lu_[size_t(r) * size_t(d) + size_t(j)] -= f * lu_[size_t(col) * size_t(d) + size_t(j)];
    }
  }
}

std::vector<double> DenseLu::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  const int d = d_;
  for (int i = 0; i < d; ++i)
    if (piv_[size_t(i)] != i) std::swap(x[size_t(i)], x[size_t(piv_[size_t(i)])]);
  for (int i = 1; i < d; ++i) {
    double acc = x[size_t(i)];
    for (int j = 0; j < i; ++j) acc -= lu_[size_t(i) * size_t(d) + size_t(j)] * x[size_t(j)];
    x[size_t(i)] = acc;
  }
  for (int i = d - 1; i >= 0; --i) {
    double acc = x[size_t(i)];
    for (int j = i + 1; j < d; ++j) acc -= lu_[size_t(i) * size_t(d) + size_t(j)] * x[size_t(j)];
    x[size_t(i)] = acc / lu_[size_t(i) * size_t(d) + size_t(i)];
  }
  return x;
}

DenseMatrix DenseLu::solve_matrix(const DenseMatrix& rhs) const {
  const int d = d_;
  DenseMatrix out(d);
  std::vector<double> col(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) col[size_t(i)] = rhs.at(i, j);
    std::vector<double> x = solve(col);
    for (int i = 0; i < d; ++i) out.at(i, j) = x[size_t(i)];
  }
  return out;
}

DenseMatrix solve_shifted(const DenseMatrix& b, double c) {
  DenseMatrix m = b;
  m.scale(-c);
  m.add_scaled_identity(1.0);
  DenseLu lu(m);
  return lu.solve_matrix(DenseMatrix::identity(b.dim()));
}

namespace {

// Polynomial part shared by both evaluation forms: constant*I + d1 B + d2 B^2.
DenseMatrix poly_part(const FractionMethod& method, const DenseMatrix& b, double constant) {
  DenseMatrix acc(b.dim());
  acc.add_scaled_identity(constant);
  if (method.poly.size() == 3) {
    double d1 = to_double_nearest(method.poly[1]);
    double d2 = to_double_nearest(method.poly[2]);
    acc.axpy(d1, b);
    if (d2 != 0.0) {
      DenseMatrix b2 = b.mul(b);
      acc.axpy(d2, b2);
    }
  }
  return acc;
}

}  // namespace

DenseMatrix eval_dense(const FractionMethod& method, const DenseMatrix& b,
                       const EvalOptions& opts) {
  if (opts.workers < 1) raise(Errc::BadArgument, "workers must be >= 1");
  if (!opts.fixed_order) raise(Errc::BadArgument, "only fixed-order reduction is supported");
  const EvalForm form = opts.form.value_or(method.form);
  const int n = int(method.shifts.size());
  const int d = b.dim();

  std::vector<DenseMatrix> terms(static_cast<size_t>(n));
  detail::parallel_for_index(n, opts.workers, [&](int i) {
    const double c = to_double_nearest(method.shifts[size_t(i)]);
    const double w = to_double_nearest(method.weights[size_t(i)]);
    if (form == EvalForm::Plain) {
      if (c == 0.0) {
        DenseMatrix t(d);
        t.add_scaled_identity(w);
        terms[size_t(i)] = std::move(t);
      } else {
        DenseMatrix m = b;
        m.scale(-c);
        m.add_scaled_identity(1.0);
        try {
          DenseLu lu(m);
          DenseMatrix t = lu.solve_matrix(DenseMatrix::identity(d));
          t.scale(w);
          terms[size_t(i)] = std::move(t);
        } catch (const Error& e) {
          raise(e.code(), "shift " + std::to_string(i + 1) + ": " + e.what());
        }
      }
    } else {
      // residual form: b_i (I - c_i B)^{-1} (c_i B); zero shifts fold into a_0
      if (c == 0.0) {
        terms[size_t(i)] = DenseMatrix(d);
        return;
      }
      DenseMatrix m = b;
      m.scale(-c);
      m.add_scaled_identity(1.0);
      DenseMatrix rhs = b;
      rhs.scale(c);
      try {
        DenseLu lu(m);
        DenseMatrix t = lu.solve_matrix(rhs);
        t.scale(w);
        terms[size_t(i)] = std::move(t);
      } catch (const Error& e) {
        raise(e.code(), "shift " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  });

  DenseMatrix acc(d);
  for (int i = 0; i < n; ++i) acc.axpy(1.0, terms[size_t(i)]);
  const double constant =
      form == EvalForm::Residual ? to_double_nearest(method.constant_term()) : (method.poly.size() == 3 ? to_double_nearest(method.poly[0]) : 0.0);
  if (form == EvalForm::Residual || method.poly.size() == 3)
    acc.axpy(1.0, poly_part(method, b, constant));
  return acc;
}

DenseMatrix pade4(const DenseMatrix& b) {
  DenseMatrix b2 = b.mul(b);
  DenseMatrix num = DenseMatrix::identity(b.dim());
  num.axpy(0.5, b);
  num.axpy(1.0 / 12.0, b2);
  DenseMatrix den = DenseMatrix::identity(b.dim());
  den.axpy(-0.5, b);
  den.axpy(1.0 / 12.0, b2);
  DenseLu lu(den);
  return lu.solve_matrix(num);
}

DenseMatrix pade4_phi1(const DenseMatrix& b) {
  DenseMatrix b2 = b.mul(b);
  DenseMatrix num = DenseMatrix::identity(b.dim());
  num.axpy(1.0 / 10.0, b);
  num.axpy(1.0 / 60.0, b2);
  DenseMatrix den = DenseMatrix::identity(b.dim());
  den.axpy(-2.0 / 5.0, b);
  den.axpy(1.0 / 20.0, b2);
  DenseLu lu(den);
  return lu.solve_matrix(num);
}

DenseMatrix taylor8(const DenseMatrix& b) {
  // degree-8 Taylor polynomial in three products
  const double s = std::sqrt(177.0);
  const double x3 = 2.0 / 3.0;
  const double x1 = x3 * (1.0 + s) / 88.0;
  const double x2 = x3 * (1.0 + s) / 352.0;
  const double x4 = (-271.0 + 29.0 * s) / (315.0 * x3);
  const double x5 = 11.0 * (-1.0 + s) / (1260.0 * x3);
  const double x6 = 11.0 * (-9.0 + s) / (5040.0 * x3);
  const double x7 = (89.0 - s) / (5040.0 * x3 * x3);
  const double y2 = (857.0 - 58.0 * s) / 630.0;

  DenseMatrix b2 = b.mul(b);
  DenseMatrix t = b;
  t.scale(x1);
  t.axpy(x2, b2);
  DenseMatrix b4 = b2.mul(t);
  DenseMatrix left = b2;
  left.scale(x3);
  left.axpy(1.0, b4);
  DenseMatrix right(b.dim());
  right.add_scaled_identity(x4);
  right.axpy(x5, b);
  right.axpy(x6, b2);
  right.axpy(x7, b4);
  DenseMatrix b8 = left.mul(right);
  DenseMatrix out(b.dim());
  out.add_scaled_identity(1.0);  // y0
  out.axpy(1.0, b);              // y1
  out.axpy(y2, b2);
  out.axpy(1.0, b8);
  return out;
}

DenseMatrix pade10(const DenseMatrix& b) {
  const double c0 = 1.0, c1 = 0.5, c2 = 1.0 / 9.0, c3 = 1.0 / 72.0, c4 = 1.0 / 1008.0,
               c5 = 1.0 / 30240.0;
  DenseMatrix a2 = b.mul(b);
  DenseMatrix a4 = a2.mul(a2);
  DenseMatrix inner(b.dim());
  inner.add_scaled_identity(c1);
  inner.axpy(c3, a2);
  inner.axpy(c5, a4);
  DenseMatrix u = b.mul(inner);
  DenseMatrix v(b.dim());
  v.add_scaled_identity(c0);
  v.axpy(c2, a2);
  v.axpy(c4, a4);
  DenseMatrix lhs = v;
  lhs.axpy(-1.0, u);
  DenseMatrix rhs = v;
  rhs.axpy(1.0, u);
  DenseLu lu(lhs);
  return lu.solve_matrix(rhs);
}

HpDenseMatrix::HpDenseMatrix(int dim, int prec_bits) : d_(dim), prec_(prec_bits) {
  a_.reserve(size_t(dim) * size_t(dim));
  for (size_t i = 0; i < size_t(dim) * size_t(dim); ++i) a_.emplace_back(0, prec_bits);
}

HpDenseMatrix HpDenseMatrix::identity(int dim, int prec_bits) {
  HpDenseMatrix m(dim, prec_bits);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

HpDenseMatrix HpDenseMatrix::from(const DenseMatrix& m, int prec_bits) {
  HpDenseMatrix out(m.dim(), prec_bits);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

HpDenseMatrix HpDenseMatrix::mul(const HpDenseMatrix& o) const {
  HpDenseMatrix out(d_, prec_);
  mpf_t tmp;
  mpf_init2(tmp, mp_bitcnt_t(prec_));
  for (int i = 0; i < d_; ++i) {
    for (int k = 0; k < d_; ++k) {
      const mpf_srcptr aik = a_[size_t(i) * size_t(d_) + size_t(k)].get_mpf_t();
      if (mpf_sgn(aik) == 0) continue;
      const BigFloat* orow = &o.a_[size_t(k) * size_t(d_)];
      BigFloat* out_row = &out.a_[size_t(i) * size_t(d_)];
      for (int j = 0; j < d_; ++j) {
        mpf_mul(tmp, aik, orow[j].get_mpf_t());
        mpf_add(out_row[j].get_mpf_t(), out_row[j].get_mpf_t(), tmp);
      }
    }
  }
  mpf_clear(tmp);
  return out;
}

void HpDenseMatrix::axpy(const BigFloat& s, const HpDenseMatrix& x) {
  mpf_t tmp;
  mpf_init2(tmp, mp_bitcnt_t(prec_));
  for (size_t i = 0; i < a_.size(); ++i) {
    mpf_mul(tmp, s.get_mpf_t(), x.a_[i].get_mpf_t());
    mpf_add(a_[i].get_mpf_t(), a_[i].get_mpf_t(), tmp);
  }
  mpf_clear(tmp);
}

void HpDenseMatrix::add_scaled_identity(const BigFloat& s) {
  for (int i = 0; i < d_; ++i) at(i, i) += s;
}

void HpDenseMatrix::scale_pow2(long e) {
  if (e == 0) return;
  for (auto& v : a_) {
    if (e > 0)
      mpf_mul_2exp(v.get_mpf_t(), v.get_mpf_t(), static_cast<mp_bitcnt_t>(e));
    else
      mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), static_cast<mp_bitcnt_t>(-e));
  }
}

double HpDenseMatrix::one_norm_d() const {
  double best = 0;
  for (int j = 0; j < d_; ++j) {
    double col = 0;
    for (int i = 0; i < d_; ++i) col += std::abs(at(i, j).get_d());
    best = std::max(best, col);
  }
  return best;
}

DenseMatrix HpDenseMatrix::to_double() const {
  DenseMatrix out(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) out.at(i, j) = at(i, j).get_d();
  return out;
}

namespace {

// Smallest Taylor degree whose remainder at argument `x` is below 10^-target,
// using the factorial-family tail with ratio x/(m+2).
int taylor_degree_for(double x, int target_digits) {
  if (x <= 0) return 1;
  double log_term = std::log10(x);  // log10 of x^{m+1}/(m+1)! at m = 0
  for (int m = 1; m < 20000; ++m) {
    log_term += std::log10(x) - std::log10(double(m + 1));
    if (x / (m + 2) < 0.5 && log_term + std::log10(2.0) < -double(target_digits)) return m;
  }
  raise(Errc::BadArgument, "no Taylor degree reaches the requested accuracy");
}

// sum_{k=0..m} coeff_k X^k by Paterson-Stockmeyer blocks.
HpDenseMatrix taylor_sum_ps(const HpDenseMatrix& x, const std::vector<Rational>& coeffs) {
  const int m = int(coeffs.size()) - 1;
  const int prec = x.prec_bits();
  const int d = x.dim();
  const int p = std::max(1, int(std::ceil(std::sqrt(double(m + 1)))));
  std::vector<HpDenseMatrix> powers;
  powers.reserve(size_t(p) + 1);
  powers.push_back(HpDenseMatrix::identity(d, prec));
  for (int i = 1; i <= p; ++i) powers.push_back(powers.back().mul(x));

  const int q = m / p;  // highest block index
  HpDenseMatrix acc(d, prec);
  for (int j = q; j >= 0; --j) {
    HpDenseMatrix block(d, prec);
    for (int r = 0; r < p; ++r) {
      int k = j * p + r;
      if (k > m) break;
      if (coeffs[size_t(k)] == 0) continue;
      block.axpy(big_float(coeffs[size_t(k)], prec), powers[size_t(r)]);
    }
    if (j == q)
      acc = std::move(block);
    else {
      acc = acc.mul(powers[size_t(p)]);
      acc.axpy(BigFloat(1, prec), block);
    }
  }
  return acc;
}

}  // namespace

HpDenseMatrix expm_oracle(const DenseMatrix& b, int digits) {
  if (digits < 30) raise(Errc::BadArgument, "oracle digits must be >= 30");
  const int prec = bits_for_digits(digits + 8);
  HpDenseMatrix h = HpDenseMatrix::from(b, prec);
  double nrm = h.one_norm_d();
  long squarings = 0;
  while (nrm > 0.25) {
    nrm /= 2;
    ++squarings;
  }
  h.scale_pow2(-squarings);
  const int m = taylor_degree_for(0.25, digits + 10);
  CoeffSeries series(FunctionId::exp());
  HpDenseMatrix e = taylor_sum_ps(h, series.prefix(m));
  for (long i = 0; i < squarings; ++i) e = e.mul(e);
  return e;
}

HpDenseMatrix phi1_oracle(const DenseMatrix& b, int digits) {
  if (digits < 30) raise(Errc::BadArgument, "oracle digits must be >= 30");
  const double nrm = std::max(b.one_norm(), 1.0);
  // guard digits absorb the cancellation proportional to the norm
  const int prec = bits_for_digits(digits + 8 + int(std::ceil(nrm)));
  HpDenseMatrix h = HpDenseMatrix::from(b, prec);
  const int m = taylor_degree_for(nrm, digits + 10);
  CoeffSeries series(FunctionId::phi(1));
  return taylor_sum_ps(h, series.prefix(m));
}

double error_vs_oracle(const HpDenseMatrix& oracle, const DenseMatrix& approx) {
  const int d = oracle.dim();
  DenseMatrix diff(d);
  BigFloat t(0, oracle.prec_bits());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      t = oracle.at(i, j) - approx.at(i, j);
      diff.at(i, j) = t.get_d();
    }
  return two_norm_est(diff);
}

}  // namespace parfrac
