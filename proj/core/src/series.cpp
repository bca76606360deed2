#include "parfrac/series.hpp"

#include <map>
#include <mutex>

#include "parfrac/error.hpp"

namespace parfrac {

std::string FunctionId::name() const {
  switch (tag) {
    case Tag::Exp:
      return "exp";
    case Tag::Phi:
      return "phi" + std::to_string(phi_order);
    case Tag::LogOneMinus:
      return "log1m";
    case Tag::Cos:
      return "cos";
    case Tag::Sin:
      return "sin";
  }
  return "?";
}

FunctionId FunctionId::parse(std::string_view name) {
  if (name == "exp") return exp();
  if (name == "log1m") return log_one_minus();
  if (name == "cos") return cosine();
  if (name == "sin") return sine();
  if (name == "phi") return phi(1);
  if (name.substr(0, 3) == "phi") {
    unsigned m = 0;
    bool ok = name.size() > 3;
    for (char c : name.substr(3)) {
      if (c < '0' || c > '9') {
        ok = false;
        break;
      }
      m = m * 10 + unsigned(c - '0');
    }
    if (ok) return phi(m);
  }
  raise(Errc::BadArgument, "unknown function: " + std::string(name));
}

struct CoeffSeries::Impl {
  FunctionId fn;
  mutable std::mutex mu;
  mutable std::vector<Rational> coeffs;
  mutable Integer factorial = 1;  // (k_fact)!
  mutable unsigned long k_fact = 0;

  explicit Impl(FunctionId f) : fn(f) {}

  Integer factorial_to(unsigned long k) const {
    while (k_fact < k) {
      ++k_fact;
      factorial *= k_fact;
    }
    return factorial;
  }

  Rational compute(int k) const {
    switch (fn.tag) {
      case FunctionId::Tag::Exp:
        return Rational(1) / Rational(factorial_to(k));
      case FunctionId::Tag::Phi:
        return Rational(1) / Rational(factorial_to(k + fn.phi_order));
      case FunctionId::Tag::LogOneMinus:
        return k == 0 ? Rational(0) : Rational(-1, k);
      case FunctionId::Tag::Cos: {
        if (k % 2 != 0) return Rational(0);
        Rational r = Rational(1) / Rational(factorial_to(k));
        return (k / 2) % 2 == 0 ? r : -r;
      }
      case FunctionId::Tag::Sin: {
        if (k % 2 == 0) return Rational(0);
        Rational r = Rational(1) / Rational(factorial_to(k));
        return ((k - 1) / 2) % 2 == 0 ? r : -r;
      }
    }
    raise(Errc::BadArgument, "bad function tag");
  }

  void ensure(int k_max) const {
    std::lock_guard<std::mutex> lock(mu);
    for (int k = int(coeffs.size()); k <= k_max; ++k) coeffs.push_back(compute(k));
  }

  Rational at(int k) const {
    ensure(k);
    std::lock_guard<std::mutex> lock(mu);
    return coeffs[size_t(k)];
  }

  // One shared Impl per function so lazily extended coefficients are cached
  // process-wide.
  static std::shared_ptr<Impl> shared(FunctionId fn) {
    static std::mutex registry_mu;
    static std::map<std::pair<int, unsigned>, std::shared_ptr<Impl>> registry;
    std::lock_guard<std::mutex> lock(registry_mu);
    auto key = std::make_pair(int(fn.tag), fn.phi_order);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto impl = std::make_shared<Impl>(fn);
    registry.emplace(key, impl);
    return impl;
  }
};

CoeffSeries::CoeffSeries(FunctionId fn) : impl_(Impl::shared(fn)) {}

FunctionId CoeffSeries::function() const { return impl_->fn; }

Rational CoeffSeries::coeff(int k) const {
  if (k < 0) raise(Errc::BadArgument, "negative series index");
  return impl_->at(k);
}

std::vector<Rational> CoeffSeries::prefix(int k_max) const {
  if (k_max < 0) raise(Errc::BadArgument, "k_max must be >= 0");
  impl_->ensure(k_max);
  std::vector<Rational> out;
  out.reserve(size_t(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) out.push_back(impl_->at(k));
  return out;
}

CoeffSeries taylor_coeffs(FunctionId function, int k_max) {
  if (k_max < 0) raise(Errc::BadArgument, "k_max must be >= 0");
  CoeffSeries s(function);
  s.coeff(k_max);
  return s;
}

std::optional<Rational> series_radius(FunctionId fn) {
  if (fn.tag == FunctionId::Tag::LogOneMinus) return Rational(1);
  return std::nullopt;
}

Rational series_tail_bound(FunctionId fn, int K, const Rational& x) {
  if (x < 0) raise(Errc::BadArgument, "tail bound needs x >= 0");
  switch (fn.tag) {
    case FunctionId::Tag::Exp:
    case FunctionId::Tag::Phi:
    case FunctionId::Tag::Cos:
    case FunctionId::Tag::Sin: {
      // |a_k| <= 1/(k+m)! (m = 0 except phi). Ratio of consecutive terms is
      // x/(k+m+1) <= x/(K+m+2), so a geometric majorant applies once K+m+2 > x.
      long m = fn.tag == FunctionId::Tag::Phi ? long(fn.phi_order) : 0;
      Rational ratio = x / Rational(K + m + 2);
      if (ratio >= 1) raise(Errc::OutOfConvergenceRadius, "tail bound needs K + 2 > x");
      Rational lead = pow_rational(x, unsigned((K + 1)));
      // first tail coefficient magnitude: 1/(K+1+m)!
      Integer fact = 1;
      for (long i = 2; i <= K + 1 + m; ++i) fact *= i;
      return lead / Rational(fact) / (Rational(1) - ratio);
    }
    case FunctionId::Tag::LogOneMinus: {
      if (x >= 1) raise(Errc::OutOfConvergenceRadius, "log(1-x) series needs x < 1");
      // sum_{k>K} x^k/k <= x^{K+1} / ((K+1)(1-x))
      return pow_rational(x, unsigned(K + 1)) / Rational(K + 1) / (Rational(1) - x);
    }
  }
  raise(Errc::BadArgument, "bad function tag");
}

}  // namespace parfrac
