#pragma once

#include <gmpxx.h>

#include "parfrac/methods.hpp"
#include "parfrac/rational.hpp"
#include "parfrac/series.hpp"

namespace parfrac {

/// GMP float with per-variable precision. Every BigFloat in this codebase is
/// created through the helpers below so the working precision is explicit;
/// gmpxx evaluates expressions at the precision of the assignment target.
using BigFloat = mpf_class;

/// Bits for the requested decimal digits plus guard bits.
int bits_for_digits(int digits);

BigFloat big_float(double x, int prec_bits);
BigFloat big_float(const Rational& q, int prec_bits);

/// exp(x) by power-of-two argument reduction and Taylor summation at the
/// precision of x.
BigFloat hp_exp(const BigFloat& x);

/// f(x) for any supported target function, summed from its Taylor series.
/// log1m requires |x| < 1; the entire functions accept any argument, with
/// precision degrading by ~|x|/ln 10 digits of cancellation for large |x|.
BigFloat hp_function(FunctionId fn, const BigFloat& x);

/// Scalar value of the approximant at x, honoring the method's plain or
/// residual evaluation form. Throws SingularShift when 1 - c_i x vanishes.
BigFloat hp_eval_method(const FractionMethod& method, const BigFloat& x);

}  // namespace parfrac
