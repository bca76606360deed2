#include "parfrac/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "parfrac/error.hpp"
#include "parfrac/highprec.hpp"

namespace parfrac {

namespace {

constexpr int kSumPrecBits = 256;  // >= 50 decimal digits with headroom
constexpr int kMaxTerms = 1500;    // tail majorant covers the rest
// Stand-in for an unbounded domain; kMaxTerms supports summation this far out.
constexpr double kDomainCap = 500.0;

enum class ProfileKind { Method, Taylor, RationalApprox };

}  // namespace

struct ErrorProfile::Impl {
  std::string name;
  CoeffSeries series{FunctionId::exp()};
  ProfileKind kind = ProfileKind::Taylor;
  int first_error_order = 1;  // s + 1

  // Method profiles
  FractionMethod method;

  // RationalApprox profiles: alpha_k of num/den by exact division, cached.
  std::vector<Rational> num, den;
  mutable std::vector<Rational> quotient;
  mutable std::mutex quotient_mu;
  double tail_m = 0, tail_rho = 0;

  mutable std::map<double, ThetaResult> thetas;
  mutable std::mutex thetas_mu;

  // alpha_k accumulated in BigFloat from exact per-term rationals. The only
  // rounding is one conversion and one add per term, absorbed by the outward
  // slack applied to the final bound.
  BigFloat alpha_bf(int k, const std::vector<Rational>& shift_powers, int prec) const {
    switch (kind) {
      case ProfileKind::Method: {
        BigFloat acc(0, prec);
        if (k < int(method.poly.size())) acc = big_float(method.poly[size_t(k)], prec);
        Rational term;
        for (size_t i = 0; i < method.shifts.size(); ++i) {
          term = method.weights[i] * shift_powers[i];
          BigFloat t(0, prec);
          mpf_set_q(t.get_mpf_t(), term.get_mpq_t());
          acc += t;
        }
        return acc;
      }
      case ProfileKind::Taylor: {
        BigFloat acc(0, prec);
        if (k < first_error_order) acc = big_float(series.coeff(k), prec);
        return acc;
      }
      case ProfileKind::RationalApprox:
        return big_float(quotient_coeff(k), prec);
    }
    raise(Errc::BadArgument, "bad profile kind");
  }

  Rational quotient_coeff(int k) const {
    std::lock_guard<std::mutex> lock(quotient_mu);
    while (int(quotient.size()) <= k) {
      int n = int(quotient.size());
      Rational acc = n < int(num.size()) ? num[size_t(n)] : Rational(0);
      for (size_t j = 1; j < den.size() && j <= size_t(n); ++j)
        acc -= den[j] * quotient[size_t(n) - j];
      quotient.push_back(acc / den[0]);
    }
    return quotient[size_t(k)];
  }

  // Rational upper limit of the domain, or nullopt when only capped.
  std::optional<Rational> domain_limit() const {
    std::optional<Rational> limit;
    if (kind == ProfileKind::Method) {
      Rational cmax = method.max_abs_shift();
      if (cmax > 0) limit = 1 / cmax;
    } else if (kind == ProfileKind::RationalApprox) {
      limit = rational_from_double(1.0 / tail_rho);
    }
    if (auto radius = series_radius(series.function())) {
      if (!limit || *radius < *limit) limit = *radius;
    }
    return limit;
  }

  double bound(double x) const {
    if (x < 0) raise(Errc::BadArgument, "forward bound needs x >= 0");
    if (x == 0) return 0.0;
    Rational xq = rational_from_double(x);
    auto limit = domain_limit();
    if (limit && xq >= *limit)
      raise(Errc::OutOfConvergenceRadius,
            "x = " + std::to_string(x) + " outside convergence domain of " + name);

    const int prec = kSumPrecBits;
    BigFloat sum(0, prec);
    BigFloat term_bf(0, prec);
    // relative cutoff 1e-40 on the running sum
    BigFloat cutoff(1e-40, prec);

    std::vector<Rational> shift_powers;  // c_i^k, exact
    if (kind == ProfileKind::Method) {
      shift_powers.resize(method.shifts.size());
      for (size_t i = 0; i < method.shifts.size(); ++i)
        shift_powers[i] = pow_rational(method.shifts[i], unsigned(first_error_order));
    }
    BigFloat xf(x, prec);
    BigFloat xpow(0, prec);
    mpf_set_q(xpow.get_mpf_t(), pow_rational(xq, unsigned(first_error_order)).get_mpq_t());

    long m_extra = series.function().tag == FunctionId::Tag::Phi
                       ? long(series.function().phi_order)
                       : 0;
    int k = first_error_order;
    for (; k < first_error_order + kMaxTerms; ++k) {
      term_bf = abs(big_float(series.coeff(k), prec) - alpha_bf(k, shift_powers, prec)) * xpow;
      sum += term_bf;
      // stop once a nonzero term is negligible and the analytic tail ratio is
      // below 1/2 (zero terms occur mid-stream in alternating series)
      if (term_bf != 0 && term_bf < sum * cutoff && k >= first_error_order + 4 &&
          Rational(k + m_extra) >= 2 * xq)
        break;
      xpow *= xf;
      if (kind == ProfileKind::Method)
        for (size_t i = 0; i < method.shifts.size(); ++i) shift_powers[i] *= method.shifts[i];
    }
    const int K = std::min(k, first_error_order + kMaxTerms - 1);

    // geometric majorant of sum_{k>K} |alpha_k| x^k
    BigFloat tail(0, prec);
    if (kind == ProfileKind::Method) {
      for (size_t i = 0; i < method.shifts.size(); ++i) {
        if (method.shifts[i] == 0) continue;
        BigFloat cx(0, prec);
        mpf_set_q(cx.get_mpf_t(), Rational(abs(method.shifts[i]) * xq).get_mpq_t());
        BigFloat pw(0, prec);
        mpf_pow_ui(pw.get_mpf_t(), cx.get_mpf_t(), unsigned(K + 1));
        tail += abs(big_float(method.weights[i], prec)) * pw / (BigFloat(1, prec) - cx);
      }
    } else if (kind == ProfileKind::RationalApprox) {
      BigFloat rho_x(tail_rho, prec);
      rho_x *= x;
      BigFloat pw(0, prec);
      mpf_pow_ui(pw.get_mpf_t(), rho_x.get_mpf_t(), unsigned(K + 1));
      tail += BigFloat(tail_m, prec) * pw / (BigFloat(1, prec) - rho_x);
    }
    // analytic remainder of the target series beyond K
    Rational series_tail = series_tail_bound(series.function(), K, xq);
    mpf_set_q(term_bf.get_mpf_t(), series_tail.get_mpq_t());
    tail += term_bf;

    sum += tail;
    sum *= BigFloat(1, prec) + BigFloat(1e-25, prec);  // outward rounding slack
    double out = sum.get_d();
    return std::nextafter(out, std::numeric_limits<double>::infinity());
  }

  double domain_hi() const {
    auto limit = domain_limit();
    if (!limit) return kDomainCap;
    return std::min(kDomainCap, to_double_nearest(*limit) * (1 - 1e-9));
  }

  ThetaResult solve_theta(double tol) const {
    if (tol <= 0) raise(Errc::BadArgument, "tolerance must be positive");
    {
      std::lock_guard<std::mutex> lock(thetas_mu);
      auto it = thetas.find(tol);
      if (it != thetas.end()) return it->second;
    }
    double hi = domain_hi();
    ThetaResult result;
    if (bound(hi) <= tol) {
      result = ThetaResult{hi, true};
    } else {
      double lo = 0;
      for (int it = 0; it < 200; ++it) {
        double mid = lo > 0 ? 0.5 * (lo + hi) : hi / 2;
        if (bound(mid) <= tol)
          lo = mid;
        else
          hi = mid;
        if (lo > 0 && (hi - lo) <= 1e-6 * lo && bound(lo) >= tol * (1 - 1e-4)) break;
      }
      result = ThetaResult{lo, false};
    }
    std::lock_guard<std::mutex> lock(thetas_mu);
    thetas.emplace(tol, result);
    return result;
  }
};

ErrorProfile::ErrorProfile(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

ErrorProfile ErrorProfile::for_method(const FractionMethod& method, const CoeffSeries& series) {
  auto impl = std::make_shared<Impl>();
  impl->name = method.name;
  impl->series = series;
  impl->kind = ProfileKind::Method;
  impl->method = method;
  impl->first_error_order = method.order + 1;
  return ErrorProfile{std::move(impl)};
}

ErrorProfile ErrorProfile::taylor(int degree, const CoeffSeries& series) {
  if (degree < 1) raise(Errc::BadArgument, "taylor degree must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->name = "taylor" + std::to_string(degree);
  impl->series = series;
  impl->kind = ProfileKind::Taylor;
  impl->first_error_order = degree + 1;
  return ErrorProfile{std::move(impl)};
}

ErrorProfile ErrorProfile::quadratic_pade(std::string name, std::span<const Rational> num,
                                          std::span<const Rational> den,
                                          const CoeffSeries& series, int order, double tail_m,
                                          double tail_rho) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->series = series;
  impl->kind = ProfileKind::RationalApprox;
  impl->num.assign(num.begin(), num.end());
  impl->den.assign(den.begin(), den.end());
  impl->first_error_order = order + 1;
  impl->tail_m = tail_m;
  impl->tail_rho = tail_rho;
  return ErrorProfile{std::move(impl)};
}

const std::string& ErrorProfile::name() const { return impl_->name; }
const CoeffSeries& ErrorProfile::series() const { return impl_->series; }
double ErrorProfile::x_conv() const { return impl_->domain_hi(); }
double ErrorProfile::forward_bound(double x) const { return impl_->bound(x); }
ThetaResult ErrorProfile::theta(double tol) const { return impl_->solve_theta(tol); }

double forward_bound(const FractionMethod& method, const CoeffSeries& series, double x) {
  return ErrorProfile::for_method(method, series).forward_bound(x);
}

ThetaResult theta(const FractionMethod& method, const CoeffSeries& series, double tol) {
  return ErrorProfile::for_method(method, series).theta(tol);
}

double theta_taylor(int degree, double tol) {
  return ErrorProfile::taylor(degree, CoeffSeries(FunctionId::exp())).theta(tol).theta;
}

ErrorProfile pade4_profile() {
  // (1 + x/2 + x^2/12) / (1 - x/2 + x^2/12); poles 3 +- i sqrt(3),
  // residue magnitude |w| = sqrt(252): |alpha_k| <= 2|w|/|c| * (1/|c|)^k.
  std::vector<Rational> num{Rational(1), Rational(1, 2), Rational(1, 12)};
  std::vector<Rational> den{Rational(1), Rational(-1, 2), Rational(1, 12)};
  return ErrorProfile::quadratic_pade("pade4", num, den, CoeffSeries(FunctionId::exp()), 4,
                                      9.166, 0.28868);
}

ErrorProfile pade4_phi1_profile() {
  // (1 + x/10 + x^2/60) / (1 - 2x/5 + x^2/20); poles 4 +- 2i, |w| = 25/3.
  std::vector<Rational> num{Rational(1), Rational(1, 10), Rational(1, 60)};
  std::vector<Rational> den{Rational(1), Rational(-2, 5), Rational(1, 20)};
  return ErrorProfile::quadratic_pade("pade4_phi1", num, den, CoeffSeries(FunctionId::phi(1)), 4,
                                      3.728, 0.22361);
}

double BackwardSeries::h_tilde_over_x(double x) const {
  BigFloat acc(0, kSumPrecBits);
  BigFloat xpow(1, kSumPrecBits);
  BigFloat xf(x, kSumPrecBits);
  for (size_t k = 1; k < beta.size(); ++k) {
    acc += abs(big_float(beta[k], kSumPrecBits)) * xpow;
    xpow *= xf;
  }
  return acc.get_d();
}

BackwardSeries backward_series_exp(const FractionMethod& method, int k_max) {
  if (!(method.function == FunctionId::exp()))
    raise(Errc::InvalidFunction, "backward series is implemented for the exponential only");
  if (k_max < method.order + 1)
    raise(Errc::BadArgument, "k_max must exceed the method order");
  std::vector<Rational> a = taylor_expansion_of_method(method, k_max);
  if (a[0] != 1) raise(Errc::NonUnitConstant, "alpha_0 must equal 1 for the series logarithm");

  // l = log(r) by n l_n = n a_n - sum_{j=1}^{n-1} j l_j a_{n-j}
  std::vector<Rational> l(size_t(k_max) + 1, Rational(0));
  for (int n = 1; n <= k_max; ++n) {
    Rational acc = Rational(n) * a[size_t(n)];
    for (int j = 1; j < n; ++j) acc -= Rational(j) * l[size_t(j)] * a[size_t(n - j)];
    l[size_t(n)] = acc / Rational(n);
  }
  BackwardSeries out;
  out.order = method.order;
  out.beta = std::move(l);
  out.beta[1] -= 1;  // h(x) = log(r(x)) - x
  return out;
}

BoundTable bound_table(std::span<const ErrorProfile> profiles, std::span<const double> tols,
                       std::span<const double> x_grid) {
  BoundTable table;
  for (const auto& p : profiles) {
    for (double x : x_grid) {
      if (x >= p.x_conv()) continue;
      table.eps_rows.push_back({p.name(), x, p.forward_bound(x)});
    }
    for (double tol : tols) {
      ThetaResult t = p.theta(tol);
      table.theta_rows.push_back({p.name(), tol, t.theta, t.saturated});
    }
  }
  return table;
}

}  // namespace parfrac
