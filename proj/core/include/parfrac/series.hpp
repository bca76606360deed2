#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parfrac/rational.hpp"

namespace parfrac {

/// Identifies one of the supported analytic target functions. Phi(0) is the
/// exponential and is canonicalized to Exp so both share one coefficient cache.
struct FunctionId {
  enum class Tag { Exp, Phi, LogOneMinus, Cos, Sin };

  Tag tag = Tag::Exp;
  unsigned phi_order = 0;  // m for Phi(m), 0 otherwise

  static FunctionId exp() { return {Tag::Exp, 0}; }
  static FunctionId phi(unsigned m) { return m == 0 ? exp() : FunctionId{Tag::Phi, m}; }
  static FunctionId log_one_minus() { return {Tag::LogOneMinus, 0}; }
  static FunctionId cosine() { return {Tag::Cos, 0}; }
  static FunctionId sine() { return {Tag::Sin, 0}; }

  bool operator==(const FunctionId&) const = default;

  /// "exp", "phi1", "phi2", ..., "log1m", "cos", "sin"
  std::string name() const;

  /// Inverse of name(); also accepts "phi" as "phi1". Throws UnknownMethod
  /// style BadArgument on anything else.
  static FunctionId parse(std::string_view name);
};

/// Exact Taylor coefficients a_k of a target function at 0. Handles share a
/// per-function global cache; the sequence extends on demand and reads are
/// safe from multiple threads.
class CoeffSeries {
 public:
  explicit CoeffSeries(FunctionId fn);

  FunctionId function() const;

  /// a_k, extending the cache as needed.
  Rational coeff(int k) const;

  /// (a_0, ..., a_{k_max})
  std::vector<Rational> prefix(int k_max) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Exact a_k for k = 0..k_max, eagerly populated.
CoeffSeries taylor_coeffs(FunctionId function, int k_max);

/// Radius of convergence of the coefficient series (unset = entire function).
std::optional<Rational> series_radius(FunctionId fn);

/// Upper bound for the absolute coefficient tail sum_{k>K} |a_k| x^k,
/// exact in rational arithmetic. Requires x >= 0 inside the radius and,
/// for the factorial families, K + 2 above x so the term ratio is < 1.
Rational series_tail_bound(FunctionId fn, int K, const Rational& x);

}  // namespace parfrac
