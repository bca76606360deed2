#include "parfrac/action.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "parfrac/bounds.hpp"
#include "parfrac/error.hpp"
#include "worker_pool.hpp"

namespace parfrac {

namespace {
constexpr double kPivotFloor = 1e-300;
}

TridiagMatrix TridiagMatrix::zero(int dim) {
  TridiagMatrix t;
  t.d = dim;
  t.sub.assign(size_t(std::max(0, dim - 1)), 0.0);
  t.diag.assign(size_t(dim), 0.0);
  t.super.assign(size_t(std::max(0, dim - 1)), 0.0);
  return t;
}

TridiagMatrix TridiagMatrix::trid121(int dim) {
  TridiagMatrix t = zero(dim);
  std::fill(t.sub.begin(), t.sub.end(), -1.0);
  std::fill(t.diag.begin(), t.diag.end(), 2.0);
  std::fill(t.super.begin(), t.super.end(), -1.0);
  return t;
}

std::vector<double> TridiagMatrix::matvec(std::span<const double> v) const {
  std::vector<double> out(size_t(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double acc = diag[size_t(i)] * v[size_t(i)];
    if (i > 0) acc += sub[size_t(i - 1)] * v[size_t(i - 1)];
    if (i + 1 < d) acc += super[size_t(i)] * v[size_t(i + 1)];
    out[size_t(i)] = acc;
  }
  return out;
}

DenseMatrix TridiagMatrix::to_dense() const {
  DenseMatrix m(d);
  for (int i = 0; i < d; ++i) {
    m.at(i, i) = diag[size_t(i)];
    if (i > 0) m.at(i, i - 1) = sub[size_t(i - 1)];
    if (i + 1 < d) m.at(i, i + 1) = super[size_t(i)];
  }
  return m;
}

double TridiagMatrix::one_norm() const {
  double best = 0;
  for (int j = 0; j < d; ++j) {
    double col = std::abs(diag[size_t(j)]);
    if (j > 0) col += std::abs(super[size_t(j - 1)]);
    if (j + 1 < d) col += std::abs(sub[size_t(j)]);
    best = std::max(best, col);
  }
  return best;
}

double two_norm_est(const TridiagMatrix& t, int iterations) {
  const int d = t.d;
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
    std::vector<double> w = t.matvec(v);
    // v <- T^T w
    std::vector<double> u(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) {
      double wi = w[size_t(i)];
      u[size_t(i)] += t.diag[size_t(i)] * wi;
      if (i > 0) u[size_t(i - 1)] += t.sub[size_t(i - 1)] * wi;
      if (i + 1 < d) u[size_t(i + 1)] += t.super[size_t(i)] * wi;
    }
    double un = normalize(u);
    v.swap(u);
    sigma = std::sqrt(un);
    if (un == 0) break;
  }
  return sigma;
}

std::vector<double> thomas_solve(const TridiagMatrix& t, std::span<const double> rhs) {
  const int d = t.d;
  if (int(rhs.size()) != d) raise(Errc::LengthMismatch, "rhs length mismatch");
  std::vector<double> dia(t.diag.begin(), t.diag.end());
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = 1; i < d; ++i) {
    if (std::abs(dia[size_t(i - 1)]) <= kPivotFloor)
      raise(Errc::ZeroPivot, "zero pivot at row " + std::to_string(i - 1));
    double w = t.sub[size_t(i - 1)] / dia[size_t(i - 1)];
    dia[size_t(i)] -= w * t.super[size_t(i - 1)];
    x[size_t(i)] -= w * x[size_t(i - 1)];
  }
  if (std::abs(dia[size_t(d - 1)]) <= kPivotFloor)
    raise(Errc::ZeroPivot, "zero pivot at row " + std::to_string(d - 1));
  x[size_t(d - 1)] /= dia[size_t(d - 1)];
  for (int i = d - 2; i >= 0; --i)
    x[size_t(i)] = (x[size_t(i)] - t.super[size_t(i)] * x[size_t(i + 1)]) / dia[size_t(i)];
  return x;
}

TridiagFactor::TridiagFactor(const TridiagMatrix& t)
    : d_(t.d), mult_(size_t(std::max(0, t.d - 1))), diag_(t.diag), super_(t.super) {
  for (int i = 1; i < d_; ++i) {
    if (std::abs(diag_[size_t(i - 1)]) <= kPivotFloor)
      raise(Errc::ZeroPivot, "zero pivot at row " + std::to_string(i - 1));
    double w = t.sub[size_t(i - 1)] / diag_[size_t(i - 1)];
    mult_[size_t(i - 1)] = w;
    diag_[size_t(i)] -= w * super_[size_t(i - 1)];
  }
  if (d_ > 0 && std::abs(diag_[size_t(d_ - 1)]) <= kPivotFloor)
    raise(Errc::ZeroPivot, "zero pivot at row " + std::to_string(d_ - 1));
}

std::vector<double> TridiagFactor::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = 1; i < d_; ++i) x[size_t(i)] -= mult_[size_t(i - 1)] * x[size_t(i - 1)];
  x[size_t(d_ - 1)] /= diag_[size_t(d_ - 1)];
  for (int i = d_ - 2; i >= 0; --i)
    x[size_t(i)] = (x[size_t(i)] - super_[size_t(i)] * x[size_t(i + 1)]) / diag_[size_t(i)];
  return x;
}

std::vector<double> PentadiagMatrix::matvec(std::span<const double> v) const {
  std::vector<double> out(size_t(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double acc = diag[size_t(i)] * v[size_t(i)];
    if (i > 1) acc += sub2[size_t(i - 2)] * v[size_t(i - 2)];
    if (i > 0) acc += sub1[size_t(i - 1)] * v[size_t(i - 1)];
    if (i + 1 < d) acc += super1[size_t(i)] * v[size_t(i + 1)];
    if (i + 2 < d) acc += super2[size_t(i)] * v[size_t(i + 2)];
    out[size_t(i)] = acc;
  }
  return out;
}

DenseMatrix PentadiagMatrix::to_dense() const {
  DenseMatrix m(d);
  for (int i = 0; i < d; ++i) {
    m.at(i, i) = diag[size_t(i)];
    if (i > 1) m.at(i, i - 2) = sub2[size_t(i - 2)];
    if (i > 0) m.at(i, i - 1) = sub1[size_t(i - 1)];
    if (i + 1 < d) m.at(i, i + 1) = super1[size_t(i)];
    if (i + 2 < d) m.at(i, i + 2) = super2[size_t(i)];
  }
  return m;
}

std::vector<double> pentadiag_solve(const PentadiagMatrix& p, std::span<const double> rhs) {
  const int d = p.d;
  if (int(rhs.size()) != d) raise(Errc::LengthMismatch, "rhs length mismatch");
  // working band W(i, c) for column offset c in [-2, 2]
  std::vector<double> w(size_t(d) * 5, 0.0);
  auto W = [&](int i, int c) -> double& { return w[size_t(i) * 5 + size_t(c + 2)]; };
  for (int i = 0; i < d; ++i) {
    W(i, 0) = p.diag[size_t(i)];
    if (i > 1) W(i, -2) = p.sub2[size_t(i - 2)];
    if (i > 0) W(i, -1) = p.sub1[size_t(i - 1)];
    if (i + 1 < d) W(i, 1) = p.super1[size_t(i)];
    if (i + 2 < d) W(i, 2) = p.super2[size_t(i)];
  }
  std::vector<double> x(rhs.begin(), rhs.end());
  for (int i = 0; i < d; ++i) {
    double piv = W(i, 0);
    if (std::abs(piv) <= kPivotFloor)
      raise(Errc::ZeroPivot, "zero pivot at row " + std::to_string(i));
    for (int off = 1; off <= 2; ++off) {
      int r = i + off;
      if (r >= d) break;
      double f = W(r, -off) / piv;
      if (f == 0.0) continue;
      W(r, -off) = 0.0;
      for (int c = 1; c <= 2; ++c)
        if (i + c < d) W(r, c - off) -= f * W(i, c);
      x[size_t(r)] -= f * x[size_t(i)];
    }
  }
  for (int i = d - 1; i >= 0; --i) {
    double acc = x[size_t(i)];
    for (int c = 1; c <= 2; ++c)
      if (i + c < d) acc -= W(i, c) * x[size_t(i + c)];
    x[size_t(i)] = acc / W(i, 0);
  }
  return x;
}

namespace {

TridiagMatrix shifted_system(const TridiagMatrix& a, double c) {
  TridiagMatrix m = TridiagMatrix::zero(a.d);
  for (int i = 0; i < a.d; ++i) m.diag[size_t(i)] = 1.0 - c * a.diag[size_t(i)];
  for (int i = 0; i + 1 < a.d; ++i) {
    m.sub[size_t(i)] = -c * a.sub[size_t(i)];
    m.super[size_t(i)] = -c * a.super[size_t(i)];
  }
  return m;
}

}  // namespace

namespace {

// Shared evaluation skeleton: solve_shift(i, rhs) solves (I - c_i A) x = rhs
// for the i-th (nonzero) shift. Accumulation runs in ascending shift index,
// then the polynomial part.
std::vector<double> assemble_action(
    const FractionMethod& method, const TridiagMatrix& a, std::span<const double> v,
    const EvalOptions& opts,
    const std::function<std::vector<double>(int, std::span<const double>)>& solve_shift) {
  if (opts.workers < 1) raise(Errc::BadArgument, "workers must be >= 1");
  if (!opts.fixed_order) raise(Errc::BadArgument, "only fixed-order reduction is supported");
  const int d = a.d;
  if (int(v.size()) != d) raise(Errc::LengthMismatch, "vector length mismatch");
  const EvalForm form = opts.form.value_or(method.form);
  const int n = int(method.shifts.size());

  std::vector<double> av;
  if (form == EvalForm::Residual || method.poly.size() == 3) av = a.matvec(v);

  std::vector<std::vector<double>> terms(static_cast<size_t>(n));
  detail::parallel_for_index(n, opts.workers, [&](int i) {
    const double c = to_double_nearest(method.shifts[size_t(i)]);
    const double w = to_double_nearest(method.weights[size_t(i)]);
    std::vector<double> term;
    if (form == EvalForm::Plain) {
      if (c == 0.0) {
        term.assign(v.begin(), v.end());
      } else {
        term = solve_shift(i, v);
      }
      for (double& t : term) t *= w;
    } else {
      // residual form: b_i x with (I - c_i A) x = c_i A v; zero shifts fold
      // into the constant term
      if (c == 0.0) {
        term.assign(size_t(d), 0.0);
      } else {
        std::vector<double> rhs(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) rhs[size_t(j)] = c * av[size_t(j)];
        term = solve_shift(i, rhs);
        for (double& t : term) t *= w;
      }
    }
    terms[size_t(i)] = std::move(term);
  });

  std::vector<double> acc(size_t(d), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) acc[size_t(j)] += terms[size_t(i)][size_t(j)];

  // polynomial part: constant * v + d_1 Av + d_2 A^2 v
  const double constant = form == EvalForm::Residual
                              ? to_double_nearest(method.constant_term())
                              : (method.poly.size() == 3 ? to_double_nearest(method.poly[0]) : 0.0);
  if (form == EvalForm::Residual || method.poly.size() == 3) {
    for (int j = 0; j < d; ++j) acc[size_t(j)] += constant * v[size_t(j)];
    if (method.poly.size() == 3) {
      const double d1 = to_double_nearest(method.poly[1]);
      const double d2 = to_double_nearest(method.poly[2]);
      std::vector<double> a2v = a.matvec(av);
      for (int j = 0; j < d; ++j)
        acc[size_t(j)] += d1 * av[size_t(j)] + d2 * a2v[size_t(j)];
    }
  }
  return acc;
}

}  // namespace

std::vector<double> action_eval(const FractionMethod& method, const TridiagMatrix& a,
                                std::span<const double> v, const EvalOptions& opts) {
  return assemble_action(method, a, v, opts, [&](int i, std::span<const double> rhs) {
    const double c = to_double_nearest(method.shifts[size_t(i)]);
    try {
      return thomas_solve(shifted_system(a, c), rhs);
    } catch (const Error& e) {
      raise(e.code(), "shift " + std::to_string(i + 1) + ": " + e.what());
    }
  });
}

ActionOperator::ActionOperator(const FractionMethod& method, const TridiagMatrix& a)
    : method_(method), a_(a) {
  factors_.reserve(method_.shifts.size());
  for (size_t i = 0; i < method_.shifts.size(); ++i) {
    const double c = to_double_nearest(method_.shifts[i]);
    if (c == 0.0) continue;
    try {
      factors_.emplace_back(shifted_system(a_, c));
    } catch (const Error& e) {
      raise(e.code(), "shift " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

std::vector<double> ActionOperator::apply(std::span<const double> v,
                                          const EvalOptions& opts) const {
  // map shift index to its factorization slot (zero shifts have none);
  // the rounded double is what the evaluator dispatches on
  std::vector<int> slot(method_.shifts.size(), -1);
  int next = 0;
  for (size_t i = 0; i < method_.shifts.size(); ++i)
    if (to_double_nearest(method_.shifts[i]) != 0.0) slot[i] = next++;
  return assemble_action(method_, a_, v, opts, [&](int i, std::span<const double> rhs) {
    return factors_[size_t(slot[size_t(i)])].solve(rhs);
  });
}

std::vector<double> substep_action(const FractionMethod& method, const TridiagMatrix& a,
                                   std::span<const double> v, int substeps,
                                   const EvalOptions& opts) {
  if (substeps < 1) raise(Errc::BadArgument, "substeps must be >= 1");
  TridiagMatrix scaled = a;
  const double inv = 1.0 / substeps;
  for (auto& e : scaled.sub) e *= inv;
  for (auto& e : scaled.diag) e *= inv;
  for (auto& e : scaled.super) e *= inv;
  std::vector<double> x(v.begin(), v.end());
  for (int nstep = 0; nstep < substeps; ++nstep) x = action_eval(method, scaled, x, opts);
  return x;
}

std::vector<double> taylor_action(int degree, const TridiagMatrix& a, std::span<const double> v) {
  if (degree < 1) raise(Errc::BadArgument, "degree must be >= 1");
  std::vector<double> acc(v.begin(), v.end());
  std::vector<double> w(v.begin(), v.end());
  for (int k = 1; k <= degree; ++k) {
    w = a.matvec(w);
    const double s = 1.0 / k;
    for (auto& e : w) e *= s;
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += w[j];
  }
  return acc;
}

namespace {

struct Thresholds {
  double theta5, theta10;
};

Thresholds selector_thresholds(double tol, bool prefer_small) {
  static std::mutex mu;
  static std::map<std::pair<double, bool>, Thresholds> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(tol, prefer_small);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  CoeffSeries series(FunctionId::exp());
  Thresholds t{};
  t.theta5 = theta(catalog("R5"), series, tol).theta;
  t.theta10 = theta(catalog(prefer_small ? "R10" : "R10star"), series, tol).theta;
  cache.emplace(key, t);
  return t;
}

// serial / parallel matvec-equivalents of one application of `method`
std::pair<double, double> method_cost(const FractionMethod& method, const CostModel& cost) {
  const double solves = method.processors();
  const double poly_matvecs = method.poly.size() == 3 ? 2.0 : 0.0;
  double serial = (solves * cost.solve_per_d + poly_matvecs * cost.matvec_per_d) / cost.matvec_per_d;
  double parallel =
      std::max(cost.solve_per_d, poly_matvecs * cost.matvec_per_d) / cost.matvec_per_d;
  return {serial, parallel};
}

}  // namespace

SelectionPlan select_method(double norm, double tol, const SelectorOptions& opts) {
  if (norm < 0) raise(Errc::BadArgument, "norm must be >= 0");
  if (tol <= 0) raise(Errc::BadArgument, "tol must be > 0");
  Thresholds th = selector_thresholds(tol, opts.prefer_small_coefficients);
  const char* high = opts.prefer_small_coefficients ? "R10" : "R10star";
  SelectionPlan plan;
  if (norm <= th.theta5) {
    plan.method = "R5";
    plan.substeps = 1;
  } else {
    plan.method = high;
    plan.substeps = norm <= th.theta10 ? 1 : int(std::ceil(norm / th.theta10));
  }
  auto [serial, parallel] = method_cost(catalog(plan.method), opts.cost);
  plan.serial_cost = serial * plan.substeps;
  plan.parallel_cost = parallel * plan.substeps;
  return plan;
}

std::vector<CostCurveRow> cost_curve(std::span<const double> norms, double tol,
                                     const SelectorOptions& opts) {
  double t5 = theta_taylor(5, tol);
  double t10 = theta_taylor(10, tol);
  double t15 = theta_taylor(15, tol);
  std::vector<CostCurveRow> rows;
  rows.reserve(norms.size());
  for (double nrm : norms) {
    if (nrm < 0) raise(Errc::BadArgument, "norm must be >= 0");
    CostCurveRow row;
    row.norm = nrm;
    if (nrm <= t5)
      row.taylor_cost = 5;
    else if (nrm <= t10)
      row.taylor_cost = 10;
    else if (nrm <= t15)
      row.taylor_cost = 15;
    else
      row.taylor_cost = 15.0 * std::ceil(nrm / t15);
    SelectionPlan plan = select_method(nrm, tol, opts);
    row.frac_serial = plan.serial_cost;
    row.frac_parallel = plan.parallel_cost;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BigFloat> action_oracle(const TridiagMatrix& a, std::span<const double> v,
                                    int digits) {
  if (digits < 30) raise(Errc::BadArgument, "oracle digits must be >= 30");
  const int prec = bits_for_digits(digits + 8);
  const int d = a.d;
  if (int(v.size()) != d) raise(Errc::LengthMismatch, "vector length mismatch");

  const double nrm = a.one_norm();
  const int substeps = std::max(1, int(std::ceil(nrm / 0.5)));

  std::vector<BigFloat> sub_hp, diag_hp, super_hp;
  for (double e : a.sub) sub_hp.emplace_back(e, prec);
  for (double e : a.diag) diag_hp.emplace_back(e, prec);
  for (double e : a.super) super_hp.emplace_back(e, prec);

  auto hp_matvec = [&](const std::vector<BigFloat>& x) {
    std::vector<BigFloat> out;
    out.reserve(size_t(d));
    for (int i = 0; i < d; ++i) {
      BigFloat acc(0, prec);
      acc = diag_hp[size_t(i)] * x[size_t(i)];
      if (i > 0) acc += sub_hp[size_t(i - 1)] * x[size_t(i - 1)];
      if (i + 1 < d) acc += super_hp[size_t(i)] * x[size_t(i + 1)];
      out.push_back(std::move(acc));
    }
    return out;
  };

  // degree for remainder below 10^-(digits+10) at scaled norm <= 1/2
  int degree = 1;
  {
    double log_term = std::log10(0.5);
    for (int m = 1; m < 20000; ++m) {
      log_term += std::log10(0.5) - std::log10(double(m + 1));
      if (log_term + std::log10(2.0) < -double(digits + 10)) {
        degree = m;
        break;
      }
    }
  }

  std::vector<BigFloat> x;
  x.reserve(size_t(d));
  for (double e : v) x.emplace_back(e, prec);
  for (int step = 0; step < substeps; ++step) {
    std::vector<BigFloat> acc = x;
    std::vector<BigFloat> w = x;
    for (int k = 1; k <= degree; ++k) {
      w = hp_matvec(w);
      BigFloat scale(substeps, prec);
      scale *= k;
      for (auto& e : w) e /= scale;
      for (int j = 0; j < d; ++j) acc[size_t(j)] += w[size_t(j)];
    }
    x = std::move(acc);
  }
  return x;
}

double error_vs_oracle(std::span<const BigFloat> oracle, std::span<const double> approx) {
  if (oracle.size() != approx.size()) raise(Errc::LengthMismatch, "vector length mismatch");
  double acc = 0;
  for (size_t i = 0; i < oracle.size(); ++i) {
    BigFloat diff(0, oracle[i].get_prec());
    diff = oracle[i] - approx[i];
    double e = diff.get_d();
    acc += e * e;
  }
  return std::sqrt(acc);
}

}  // namespace parfrac
