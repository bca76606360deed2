#include "parfrac/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

#include "parfrac/error.hpp"

namespace parfrac {

namespace {

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational rational_from_string(std::string_view text) {
  std::string s(text);
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) raise(Errc::BadArgument, "empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_integer_token(num) || !valid_integer_token(den))
      raise(Errc::BadArgument, "malformed rational literal: " + s);
    Rational q(num + "/" + den);
    if (q.get_den() == 0) raise(Errc::BadArgument, "zero denominator in: " + s);
    q.canonicalize();
    return q;
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (!valid_integer_token(digits.empty() ? "x" : digits))
      raise(Errc::BadArgument, "malformed decimal literal: " + s);
    Rational q{Integer(digits)};
    Integer den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    q /= Rational(den);
    return q;
  }

  if (!valid_integer_token(s)) raise(Errc::BadArgument, "malformed rational literal: " + s);
  return Rational{Integer(s)};
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) raise(Errc::BadArgument, "non-finite value has no rational form");
  return Rational(x);  // mpq from double is exact
}

double to_double_nearest(const Rational& q) {
  double approx = q.get_d();  // truncated toward zero
  if (!std::isfinite(approx)) return approx;
  double cand[3] = {approx, std::nextafter(approx, std::numeric_limits<double>::infinity()),
                    std::nextafter(approx, -std::numeric_limits<double>::infinity())};
  double best = cand[0];
  Rational best_err = abs(q - Rational(cand[0]));
  for (int i = 1; i < 3; ++i) {
    if (!std::isfinite(cand[i])) continue;
    Rational err = abs(q - Rational(cand[i]));
    if (err < best_err) {
      best = cand[i];
      best_err = err;
    } else if (err == best_err) {
      // ties to even mantissa
      std::uint64_t bits_best, bits_cand;
      std::memcpy(&bits_best, &best, 8);
      std::memcpy(&bits_cand, &cand[i], 8);
      if ((bits_cand & 1u) == 0 && (bits_best & 1u) != 0) best = cand[i];
    }
  }
  return best;
}

std::string to_fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string exact_decimal_string(double x) {
  if (x == 0.0) return "0";
  if (!std::isfinite(x)) raise(Errc::BadArgument, "non-finite value has no exact decimal");
  Rational q(x);
  bool neg = q < 0;
  if (neg) q = -q;
  // q = n / 2^k exactly; n * 5^k gives the decimal digits, scaled by 10^-k.
  Integer num = q.get_num(), den = q.get_den();
  unsigned long k = mpz_scan1(den.get_mpz_t(), 0);  // den is a power of two
  Integer five = 1;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, k);
  Integer digits = num * five;
  std::string d = digits.get_str();
  long exp10 = static_cast<long>(d.size()) - 1 - static_cast<long>(k);
  while (d.size() > 1 && d.back() == '0') d.pop_back();
  std::string out = neg ? "-" : "";
  out += d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rational pow_rational(const Rational& base, unsigned long exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), exponent);
  return r;  // base canonical => power canonical
}

}  // namespace parfrac
