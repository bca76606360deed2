#include "parfrac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "parfrac/bounds.hpp"
#include "parfrac/error.hpp"
#include "parfrac/rng.hpp"
#include "worker_pool.hpp"

namespace parfrac {

MatrixSpec::Kind MatrixSpec::parse_kind(const std::string& name) {
  if (name == "randn") return Kind::Randn;
  if (name == "cauchy") return Kind::Cauchy;
  if (name == "trid121") return Kind::Trid121;
  raise(Errc::BadArgument, "unknown matrix kind: " + name);
}

std::string MatrixSpec::kind_name(Kind kind) {
  switch (kind) {
    case Kind::Randn:
      return "randn";
    case Kind::Cauchy:
      return "cauchy";
    case Kind::Trid121:
      return "trid121";
  }
  return "?";
}

DenseMatrix make_dense_matrix(const MatrixSpec& spec) {
  if (spec.dim < 1) raise(Errc::BadArgument, "matrix dimension must be >= 1");
  const int d = spec.dim;
  DenseMatrix m(d);
  switch (spec.kind) {
    case MatrixSpec::Kind::Randn: {
      NormalSampler normal(spec.seed);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = normal.next();
      break;
    }
    case MatrixSpec::Kind::Cauchy: {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = 1.0 / (1.0 + double(i - j) * double(i - j));
      break;
    }
    case MatrixSpec::Kind::Trid121:
      m = TridiagMatrix::trid121(d).to_dense();
      break;
  }
  return m;
}

TridiagMatrix make_tridiag_matrix(const MatrixSpec& spec) {
  if (spec.dim < 1) raise(Errc::BadArgument, "matrix dimension must be >= 1");
  if (spec.kind != MatrixSpec::Kind::Trid121)
    raise(Errc::BadArgument, "action benchmarks need a tridiagonal matrix kind (trid121)");
  return TridiagMatrix::trid121(spec.dim);
}

std::vector<double> random_unit_vector(int dim, std::uint64_t seed) {
  if (dim < 1) raise(Errc::BadArgument, "vector dimension must be >= 1");
  NormalSampler normal(seed);
  std::vector<double> v(static_cast<size_t>(dim));
  double norm2 = 0;
  for (auto& e : v) {
    e = normal.next();
    norm2 += e * e;
  }
  norm2 = std::sqrt(norm2);
  if (norm2 > 0)
    for (auto& e : v) e /= norm2;
  return v;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || lo <= 0 || hi < lo) raise(Errc::BadArgument, "bad log grid");
  std::vector<double> out;
  out.reserve(size_t(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(lo * std::exp(ratio * i));
  return out;
}

std::string cmd_build(const BuildRequest& request) {
  CoeffSeries series(request.function);
  FractionMethod method;
  if (!request.template_name.empty()) {
    if (!request.shifts.empty())
      raise(Errc::BadArgument, "give either explicit shifts or a template, not both");
    MethodTemplate tmpl;
    if (request.template_name == "frac4")
      tmpl = frac4_template();
    else if (request.template_name == "frac8")
      tmpl = frac8_template();
    else
      raise(Errc::BadArgument, "unknown template: " + request.template_name);
    if (request.alpha <= 0) raise(Errc::BadArgument, "alpha must be positive");
    method = build_plain(tmpl.shift_pattern(request.alpha), series, request.order, request.name);
  } else if (!request.free_weights.empty()) {
    method = build_hybrid(request.shifts, request.free_weights, series, request.order,
                          request.name);
  } else {
    method = build_plain(request.shifts, series, request.order, request.name);
  }
  return method_card(method);
}

namespace {

ErrorProfile profile_for_token(const std::string& token) {
  if (token == "pade4") return pade4_profile();
  if (token == "pade4_phi1") return pade4_phi1_profile();
  if (token.rfind("taylor", 0) == 0) {
    int degree = 0;
    try {
      degree = std::stoi(token.substr(6));
    } catch (...) {
      raise(Errc::BadArgument, "bad taylor token: " + token);
    }
    return ErrorProfile::taylor(degree, CoeffSeries(FunctionId::exp()));
  }
  const FractionMethod& m = catalog(token);
  return ErrorProfile::for_method(m, CoeffSeries(m.function));
}

}  // namespace

std::string cmd_theta(const ThetaRequest& request) {
  if (request.methods.empty()) raise(Errc::BadArgument, "no methods given");
  std::ostringstream os;
  if (!request.eps_grid.empty()) {
    os << "method,x,epsilon\n";
    for (const auto& token : request.methods) {
      ErrorProfile profile = profile_for_token(token);
      for (double x : request.eps_grid) {
        if (x >= profile.x_conv()) continue;
        os << token << "," << format_sig17(x) << "," << format_sig17(profile.forward_bound(x))
           << "\n";
      }
    }
    return os.str();
  }
  if (request.tols.empty()) raise(Errc::BadArgument, "no tolerances given");
  os << "method,tol,theta,theta_3dp,saturated\n";
  char buf[32];
  for (const auto& token : request.methods) {
    ErrorProfile profile = profile_for_token(token);
    for (double tol : request.tols) {
      ThetaResult t = profile.theta(tol);
      std::snprintf(buf, sizeof buf, "%.3f", t.theta);
      os << token << "," << exact_decimal_string(tol) << "," << format_sig17(t.theta) << ","
         << buf << "," << (t.saturated ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

namespace {

constexpr double kInverseProducts = 4.0 / 3.0;  // dense inverse, in products

struct DenseEntry {
  std::string token;
  FunctionId function;
  std::function<DenseMatrix(const DenseMatrix&)> eval;
  double serial_cost = 0, parallel_cost = 0;  // product-equivalents
};

struct ActionEntry {
  std::string token;
  std::function<std::vector<double>(const TridiagMatrix&, std::span<const double>)> eval;
  double serial_cost = 0, parallel_cost = 0;  // matvec-equivalents
};

// token = base[:plain|:residual]
std::pair<std::string, std::optional<EvalForm>> split_form(const std::string& token) {
  auto pos = token.find(':');
  if (pos == std::string::npos) return {token, std::nullopt};
  std::string base = token.substr(0, pos), suffix = token.substr(pos + 1);
  if (suffix == "plain") return {base, EvalForm::Plain};
  if (suffix == "residual") return {base, EvalForm::Residual};
  raise(Errc::BadArgument, "unknown form suffix in token: " + token);
}

DenseEntry dense_entry(const std::string& token) {
  DenseEntry e;
  e.token = token;
  if (token == "pade4") {
    e.function = FunctionId::exp();
    e.eval = [](const DenseMatrix& b) { return pade4(b); };
    e.serial_cost = e.parallel_cost = 1.0 + kInverseProducts;
    return e;
  }
  if (token == "pade4_phi1") {
    e.function = FunctionId::phi(1);
    e.eval = [](const DenseMatrix& b) { return pade4_phi1(b); };
    e.serial_cost = e.parallel_cost = 1.0 + kInverseProducts;
    return e;
  }
  if (token == "taylor8") {
    e.function = FunctionId::exp();
    e.eval = [](const DenseMatrix& b) { return taylor8(b); };
    e.serial_cost = e.parallel_cost = 3.0;
    return e;
  }
  if (token == "pade10") {
    e.function = FunctionId::exp();
    e.eval = [](const DenseMatrix& b) { return pade10(b); };
    e.serial_cost = e.parallel_cost = 3.0 + kInverseProducts;
    return e;
  }
  auto [base, form] = split_form(token);
  FractionMethod method = catalog(base);
  if (form) method.form = *form;
  e.function = method.function;
  const double poly_products = method.poly.size() == 3 ? 1.0 : 0.0;
  e.serial_cost = method.processors() * kInverseProducts + poly_products;
  e.parallel_cost = std::max(kInverseProducts, poly_products);
  e.eval = [method](const DenseMatrix& b) { return eval_dense(method, b); };
  return e;
}

ActionEntry action_entry(const std::string& token) {
  ActionEntry e;
  e.token = token;
  if (token.rfind("taylor", 0) == 0) {
    int degree = 0;
    try {
      degree = std::stoi(token.substr(6));
    } catch (...) {
      raise(Errc::BadArgument, "bad taylor token: " + token);
    }
    if (degree < 1) raise(Errc::BadArgument, "bad taylor token: " + token);
    e.eval = [degree](const TridiagMatrix& a, std::span<const double> v) {
      return taylor_action(degree, a, v);
    };
    e.serial_cost = e.parallel_cost = degree;
    return e;
  }
  auto [base, form] = split_form(token);
  FractionMethod method = catalog(base);
  if (form) method.form = *form;
  if (!(method.function == FunctionId::exp()))
    raise(Errc::BadArgument, "action benchmark targets the exponential; token " + token +
                                 " approximates " + method.function.name());
  const CostModel cost = CostModel::tridiagonal();
  // residual form costs one matvec + one solve per processor
  const double per_solve =
      method.form == EvalForm::Residual ? cost.solve_per_d + cost.matvec_per_d : cost.solve_per_d;
  const double poly_flops = method.poly.size() == 3 ? 2.0 * cost.matvec_per_d : 0.0;
  e.serial_cost = (method.processors() * per_solve + poly_flops) / cost.matvec_per_d;
  e.parallel_cost = std::max(per_solve, poly_flops) / cost.matvec_per_d;
  e.eval = [method](const TridiagMatrix& a, std::span<const double> v) {
    return action_eval(method, a, v);
  };
  return e;
}

std::vector<double> resolve_grid(const BenchRequest& request) {
  std::vector<double> grid =
      request.h_norm_grid.empty() ? log_grid(1e-2, 4.0, 40) : request.h_norm_grid;
  for (double h : grid)
    if (!(h > 0)) raise(Errc::BadArgument, "h grid values must be positive");
  return grid;
}

std::string render_bench_csv(const std::string& cost_unit,
                             const std::vector<std::vector<BenchRecord>>& records) {
  std::ostringstream os;
  os << "method,h_norm,error_2norm,serial_cost_" << cost_unit << ",parallel_cost_" << cost_unit
     << "\n";
  for (const auto& per_method : records)
    for (const auto& r : per_method)
      os << r.method << "," << format_sig17(r.h_norm) << "," << format_sig17(r.error) << ","
         << format_sig17(r.serial_cost) << "," << format_sig17(r.parallel_cost) << "\n";
  return os.str();
}

}  // namespace

std::string cmd_bench_dense(const BenchRequest& request) {
  if (request.methods.empty()) raise(Errc::BadArgument, "no methods given");
  if (request.workers < 1) raise(Errc::BadArgument, "workers must be >= 1");
  if (request.oracle_digits < 30) raise(Errc::BadArgument, "oracle digits must be >= 30");
  const std::vector<double> grid = resolve_grid(request);

  std::vector<DenseEntry> entries;
  for (const auto& token : request.methods) entries.push_back(dense_entry(token));
  bool any_exp = false, any_phi1 = false;
  for (const auto& e : entries) {
    if (e.function == FunctionId::phi(1))
      any_phi1 = true;
    else if (e.function == FunctionId::exp())
      any_exp = true;
    else
      raise(Errc::BadArgument, "no dense oracle for function " + e.function.name());
  }

  const DenseMatrix a = make_dense_matrix(request.matrix);
  const double scale = std::max(two_norm_est(a), 1e-300);

  std::vector<std::vector<BenchRecord>> records(entries.size());
  for (auto& v : records) v.resize(grid.size());

  detail::parallel_for_index(int(grid.size()), request.workers, [&](int gi) {
    const double h = grid[size_t(gi)] / scale;
    DenseMatrix b = a;
    b.scale(h);
    std::optional<HpDenseMatrix> exp_oracle, phi_oracle;
    if (any_exp) exp_oracle = expm_oracle(b, request.oracle_digits);
    if (any_phi1) phi_oracle = phi1_oracle(b, request.oracle_digits);
    for (size_t mi = 0; mi < entries.size(); ++mi) {
      const DenseEntry& e = entries[mi];
      DenseMatrix value = e.eval(b);
      const HpDenseMatrix& oracle =
          e.function == FunctionId::phi(1) ? *phi_oracle : *exp_oracle;
      BenchRecord r;
      r.method = e.token;
      r.h_norm = grid[size_t(gi)];
      r.error = error_vs_oracle(oracle, value);
      r.serial_cost = e.serial_cost;
      r.parallel_cost = e.parallel_cost;
      records[mi][size_t(gi)] = std::move(r);
    }
  });
  return render_bench_csv("product_eq", records);
}

std::string cmd_bench_action(const BenchRequest& request) {
  if (request.methods.empty()) raise(Errc::BadArgument, "no methods given");
  if (request.workers < 1) raise(Errc::BadArgument, "workers must be >= 1");
  if (request.oracle_digits < 30) raise(Errc::BadArgument, "oracle digits must be >= 30");
  const std::vector<double> grid = resolve_grid(request);

  std::vector<ActionEntry> entries;
  for (const auto& token : request.methods) entries.push_back(action_entry(token));

  const TridiagMatrix a = make_tridiag_matrix(request.matrix);
  const double scale = std::max(two_norm_est(a), 1e-300);
  const std::vector<double> v = random_unit_vector(request.matrix.dim, request.matrix.seed);

  std::vector<std::vector<BenchRecord>> records(entries.size());
  for (auto& r : records) r.resize(grid.size());

  detail::parallel_for_index(int(grid.size()), request.workers, [&](int gi) {
    const double h = grid[size_t(gi)] / scale;
    TridiagMatrix ah = a;
    for (auto& e : ah.sub) e *= h;
    for (auto& e : ah.diag) e *= h;
    for (auto& e : ah.super) e *= h;
    const std::vector<BigFloat> oracle = action_oracle(ah, v, request.oracle_digits);
    for (size_t mi = 0; mi < entries.size(); ++mi) {
      const ActionEntry& e = entries[mi];
      std::vector<double> value = e.eval(ah, v);
      BenchRecord r;
      r.method = e.token;
      r.h_norm = grid[size_t(gi)];
      r.error = error_vs_oracle(oracle, value);
      r.serial_cost = e.serial_cost;
      r.parallel_cost = e.parallel_cost;
      records[mi][size_t(gi)] = std::move(r);
    }
  });
  return render_bench_csv("matvec_eq", records);
}

std::string cmd_cost_curve(const CostCurveRequest& request) {
  if (request.tol <= 0) raise(Errc::BadArgument, "tol must be > 0");
  std::vector<CostCurveRow> rows = cost_curve(request.norms, request.tol);
  std::ostringstream os;
  os << "norm_1norm,taylor_cost_matvec_eq,frac_serial_cost_matvec_eq,frac_parallel_cost_matvec_"
        "eq\n";
  for (const auto& r : rows)
    os << format_sig17(r.norm) << "," << format_sig17(r.taylor_cost) << ","
       << format_sig17(r.frac_serial) << "," << format_sig17(r.frac_parallel) << "\n";
  return os.str();
}

}  // namespace parfrac
