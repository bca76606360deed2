#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace parfrac {

using Integer = mpz_class;

/// Exact rational number. Always canonical: lowest terms, positive
/// denominator. All arithmetic through mpq_class stays canonical.
using Rational = mpq_class;

/// Parses "num/den", "num", or a plain decimal such as "-2.5" into an exact
/// rational. Throws Errc::BadArgument on malformed input or zero denominator.
Rational rational_from_string(std::string_view text);

/// Exact binary expansion of a finite double.
Rational rational_from_double(double x);

/// Rounds to the nearest double, ties to even. mpq_get_d truncates, so the
/// truncated value and its two neighbours are compared exactly.
double to_double_nearest(const Rational& q);

/// "num/den", or "num" when the denominator is 1.
std::string to_fraction_string(const Rational& q);

/// Exact decimal rendering of a finite double in scientific form, e.g.
/// 2^-24 -> "5.9604644775390625e-8". Every double has a finite expansion.
std::string exact_decimal_string(double x);

/// printf %.17g: shortest fixed-width form carrying full double precision.
std::string format_sig17(double x);

Rational pow_rational(const Rational& base, unsigned long exponent);

}  // namespace parfrac
