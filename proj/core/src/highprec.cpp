#include "parfrac/highprec.hpp"

#include <cmath>

#include "parfrac/error.hpp"

namespace parfrac {

int bits_for_digits(int digits) {
  return int(std::ceil(digits * 3.3219280948873623)) + 64;
}

BigFloat big_float(double x, int prec_bits) { return BigFloat(x, prec_bits); }

BigFloat big_float(const Rational& q, int prec_bits) {
  BigFloat f(0, prec_bits);
  mpf_set_q(f.get_mpf_t(), q.get_mpq_t());
  return f;
}

namespace {

// Series for exp at |x| <= 1/2: terms fall at least geometrically with
// ratio 1/2 once k exceeds 1, so stop when a term no longer moves the sum.
BigFloat exp_series_small(const BigFloat& x) {
  const int prec = int(x.get_prec());
  BigFloat sum(1, prec), term(1, prec), eps(0, prec);
  mpf_div_2exp(eps.get_mpf_t(), sum.get_mpf_t(), prec + 8);
  for (int k = 1; k < 10000; ++k) {
    term *= x;
    term /= k;
    sum += term;
    if (abs(term) < eps) break;
  }
  return sum;
}

}  // namespace

BigFloat hp_exp(const BigFloat& x) {
  const int prec = int(x.get_prec());
  // scale x into [-1/2, 1/2] by powers of two, then square back
  long shifts = 0;
  BigFloat ax(abs(x), prec);
  while (ax > 0.5) {
    mpf_div_2exp(ax.get_mpf_t(), ax.get_mpf_t(), 1);
    ++shifts;
  }
  BigFloat scaled(x, prec + shifts + 8);
  if (shifts > 0) mpf_div_2exp(scaled.get_mpf_t(), scaled.get_mpf_t(), shifts);
  BigFloat r = exp_series_small(scaled);
  for (long i = 0; i < shifts; ++i) r *= r;
  BigFloat out(0, prec);
  out = r;
  return out;
}

BigFloat hp_function(FunctionId fn, const BigFloat& x) {
  const int prec = int(x.get_prec());
  if (fn.tag == FunctionId::Tag::Exp) return hp_exp(x);
  if (fn.tag == FunctionId::Tag::LogOneMinus) {
    if (abs(x) >= 1) raise(Errc::OutOfConvergenceRadius, "log(1-x) needs |x| < 1");
  }
  // direct series summation; adequate for the moderate arguments used here
  CoeffSeries series(fn);
  BigFloat sum(0, prec), term(1, prec), eps(0, prec);
  BigFloat ax(abs(x), prec);
  // bound below which accumulated terms can no longer matter
  BigFloat scale(1, prec);
  if (ax > 1) {
    // crude overestimate of the largest partial term, exp-dominated families
    scale = hp_exp(ax);
  }
  mpf_div_2exp(eps.get_mpf_t(), scale.get_mpf_t(), prec + 8);
  for (int k = 0; k < 100000; ++k) {
    Rational a = series.coeff(k);
    if (a != 0) {
      BigFloat coeff = big_float(a, prec);
      sum += coeff * term;
      BigFloat mag(0, prec);
      mag = abs(coeff) * abs(term);
      if (k > 2 && ax <= k && mag < eps) break;
    }
    term *= x;
  }
  return sum;
}

BigFloat hp_eval_method(const FractionMethod& method, const BigFloat& x) {
  const int prec = int(x.get_prec());
  BigFloat sum(0, prec);
  if (method.form == EvalForm::Plain) {
    for (size_t i = 0; i < method.shifts.size(); ++i) {
      BigFloat den(1, prec);
      den -= big_float(method.shifts[i], prec) * x;
      if (den == 0)
        raise(Errc::SingularShift, "1 - c_i x = 0 at shift " + std::to_string(i + 1));
      sum += big_float(method.weights[i], prec) / den;
    }
    for (size_t k_idx = 0; k_idx < method.poly.size(); ++k_idx) {
      BigFloat xk(1, prec);
      for (size_t j = 0; j < k_idx; ++j) xk *= x;
      sum += big_float(method.poly[k_idx], prec) * xk;
    }
    return sum;
  }
  // residual form: a_0 + d_1 x + d_2 x^2 + sum_i b_i c_i x / (1 - c_i x)
  sum = big_float(method.constant_term(), prec);
  if (method.poly.size() == 3) {
    sum += big_float(method.poly[1], prec) * x;
    sum += big_float(method.poly[2], prec) * x * x;
  }
  for (size_t i = 0; i < method.shifts.size(); ++i) {
    if (method.shifts[i] == 0) continue;
    BigFloat cx(0, prec);
    cx = big_float(method.shifts[i], prec) * x;
    BigFloat den(1, prec);
    den -= cx;
    if (den == 0) raise(Errc::SingularShift, "1 - c_i x = 0 at shift " + std::to_string(i + 1));
    sum += big_float(method.weights[i], prec) * cx / den;
  }
  return sum;
}

}  // namespace parfrac
