#include <doctest.h>

#include "parfrac/error.hpp"
#include "parfrac/highprec.hpp"
#include "parfrac/series.hpp"

using namespace parfrac;

TEST_SUITE_BEGIN("series");

TEST_CASE("taylor coefficients of the five families") {
  auto exp5 = taylor_coeffs(FunctionId::exp(), 4).prefix(4);
  CHECK(exp5 == std::vector<Rational>{1, 1, Rational(1, 2), Rational(1, 6), Rational(1, 24)});

  auto phi1 = taylor_coeffs(FunctionId::phi(1), 4).prefix(4);
  CHECK(phi1 == std::vector<Rational>{1, Rational(1, 2), Rational(1, 6), Rational(1, 24),
                                      Rational(1, 120)});

  auto log1m = taylor_coeffs(FunctionId::log_one_minus(), 4).prefix(4);
  CHECK(log1m == std::vector<Rational>{0, -1, Rational(-1, 2), Rational(-1, 3), Rational(-1, 4)});

  auto cosc = taylor_coeffs(FunctionId::cosine(), 6).prefix(6);
  CHECK(cosc == std::vector<Rational>{1, 0, Rational(-1, 2), 0, Rational(1, 24), 0,
                                      Rational(-1, 720)});

  auto sinc = taylor_coeffs(FunctionId::sine(), 5).prefix(5);
  CHECK(sinc == std::vector<Rational>{0, 1, 0, Rational(-1, 6), 0, Rational(1, 120)});
}

TEST_CASE("phi(0) coincides with exp") {
  CoeffSeries phi0(FunctionId::phi(0));
  CoeffSeries exp_series(FunctionId::exp());
  CHECK(phi0.function() == FunctionId::exp());
  for (int k = 0; k <= 30; ++k) CHECK(phi0.coeff(k) == exp_series.coeff(k));
}

TEST_CASE("coefficients are canonical") {
  CoeffSeries s(FunctionId::phi(2));
  for (int k = 0; k <= 40; ++k) {
    Rational a = s.coeff(k);
    CHECK(gcd(a.get_num(), a.get_den()) == 1);
    CHECK(a.get_den() > 0);
  }
}

TEST_CASE("truncated series matches high precision function values at |x| <= 0.1") {
  // the function evaluation needs headroom well below the k_max = 40 remainder
  const int prec = 512;
  const int k_max = 40;
  const FunctionId fns[] = {FunctionId::exp(), FunctionId::phi(1), FunctionId::phi(3),
                            FunctionId::log_one_minus(), FunctionId::cosine(), FunctionId::sine()};
  for (const auto& fn : fns) {
    CoeffSeries s(fn);
    for (double x : {0.1, -0.1, 0.05, 0.01}) {
      BigFloat xf(x, prec);
      BigFloat sum(0, prec), pw(1, prec);
      for (int k = 0; k <= k_max; ++k) {
        sum += big_float(s.coeff(k), prec) * pw;
        pw *= xf;
      }
      BigFloat exact = hp_function(fn, xf);
      // analytic truncation remainder at |x| <= 0.1 with k_max 40 terms
      Rational remainder = series_tail_bound(fn, k_max, Rational(1, 10));
      BigFloat diff(0, prec);
      diff = abs(sum - exact);
      CHECK(diff <= big_float(remainder, prec));
    }
  }
}

TEST_CASE("tail bound dominates the true tail") {
  // exp at x = 1/2, K = 10: bound vs exact tail value
  Rational x(1, 2);
  Rational bound = series_tail_bound(FunctionId::exp(), 10, x);
  BigFloat exact_tail(0, 256);
  exact_tail = hp_exp(big_float(x, 256));
  CoeffSeries s(FunctionId::exp());
  BigFloat pw(1, 256);
  for (int k = 0; k <= 10; ++k) {
    exact_tail -= big_float(s.coeff(k), 256) * pw;
    pw *= big_float(x, 256);
  }
  CHECK(exact_tail > 0);
  CHECK(big_float(bound, 256) >= exact_tail);
  CHECK(big_float(bound, 256) <= exact_tail * 2);  // and reasonably tight
}

TEST_CASE("log series domain") {
  CHECK_THROWS_AS(series_tail_bound(FunctionId::log_one_minus(), 5, Rational(1)), Error);
  CHECK(series_radius(FunctionId::log_one_minus()).value() == Rational(1));
  CHECK(!series_radius(FunctionId::exp()).has_value());
}

TEST_CASE("function id names") {
  CHECK(FunctionId::parse("exp") == FunctionId::exp());
  CHECK(FunctionId::parse("phi1") == FunctionId::phi(1));
  CHECK(FunctionId::parse("phi") == FunctionId::phi(1));
  CHECK(FunctionId::parse("phi0") == FunctionId::exp());
  CHECK(FunctionId::parse("log1m") == FunctionId::log_one_minus());
  CHECK(FunctionId::phi(2).name() == "phi2");
  CHECK_THROWS_AS(FunctionId::parse("tan"), Error);
}

TEST_SUITE_END();
