#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parfrac/methods.hpp"
#include "parfrac/rational.hpp"
#include "parfrac/series.hpp"

namespace parfrac {

struct ThetaResult {
  double theta = 0;
  bool saturated = false;  // bound stays below tol on the whole domain
};

/// Forward error-bound curve eps(x) = sum_{k>s} |a_k - alpha_k| x^k for one
/// approximant of a target series, with a certified upper-bound tail. The
/// summed terms are exact rationals; only the final accumulation rounds, and
/// the result is rounded outward.
class ErrorProfile {
 public:
  /// Profile of a fraction method (alpha_k = d_k + sum b_i c_i^k).
  static ErrorProfile for_method(const FractionMethod& method, const CoeffSeries& series);

  /// Truncated Taylor polynomial of the target series, degree m.
  static ErrorProfile taylor(int degree, const CoeffSeries& series);

  /// Rational approximant num/den (quadratics, num[0..2]/den[0..2]) whose
  /// Taylor coefficients alpha_k obey |alpha_k| <= tail_m * tail_rho^k for
  /// k >= 1. Used for the Pade baselines; the constants come from the exact
  /// partial-fraction form of each baseline.
  static ErrorProfile quadratic_pade(std::string name, std::span<const Rational> num,
                                     std::span<const Rational> den, const CoeffSeries& series,
                                     int order, double tail_m, double tail_rho);

  const std::string& name() const;
  const CoeffSeries& series() const;

  /// Largest valid argument: min of the fraction convergence radius
  /// 1/max|c_i| and the target series radius. Infinite domains report a
  /// large finite cap.
  double x_conv() const;

  /// Certified upper bound on |f(x) - r(x)| for 0 <= x < x_conv().
  double forward_bound(double x) const;

  /// Largest x with forward_bound(x) <= tol, bisected to 1e-6 relative
  /// width. Saturates at x_conv when the bound never reaches tol.
  ThetaResult theta(double tol) const;

 private:
  struct Impl;
  explicit ErrorProfile(std::shared_ptr<Impl> impl);
  std::shared_ptr<Impl> impl_;
};

double forward_bound(const FractionMethod& method, const CoeffSeries& series, double x);
ThetaResult theta(const FractionMethod& method, const CoeffSeries& series, double tol);

/// Theta of the degree-m Taylor polynomial for the exponential.
double theta_taylor(int degree, double tol);

/// Baseline profiles from the published Pade approximants.
ErrorProfile pade4_profile();
ErrorProfile pade4_phi1_profile();

/// Backward error series of an exponential approximant:
/// h(x) = log(r(x)) - x = sum beta_k x^k, exact through k_max.
/// beta_k vanishes exactly for k <= order.
struct BackwardSeries {
  std::vector<Rational> beta;
  int order = 0;

  /// Truncated majorant ratio htilde(x)/x = sum_k |beta_k| x^{k-1}.
  double h_tilde_over_x(double x) const;
};

BackwardSeries backward_series_exp(const FractionMethod& method, int k_max);

/// Aggregated bound data for several profiles: eps over an x grid and theta
/// per tolerance. Grid points outside a profile's domain are skipped.
struct BoundTable {
  struct EpsRow {
    std::string method;
    double x;
    double epsilon;
  };
  struct ThetaRow {
    std::string method;
    double tol;
    double theta;
    bool saturated;
  };
  std::vector<EpsRow> eps_rows;
  std::vector<ThetaRow> theta_rows;
};

BoundTable bound_table(std::span<const ErrorProfile> profiles, std::span<const double> tols,
                       std::span<const double> x_grid);

}  // namespace parfrac
