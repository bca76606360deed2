#include "parfrac/methods.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "parfrac/bounds.hpp"
#include "parfrac/error.hpp"

namespace parfrac {

namespace {

// mpq_class(p, q) does not canonicalize; normalize anything that crosses the
// module boundary so rational comparisons and set semantics hold.
std::vector<Rational> canonical_copy(std::span<const Rational> values) {
  std::vector<Rational> out(values.begin(), values.end());
  for (auto& v : out) v.canonicalize();
  return out;
}

void check_distinct(std::span<const Rational> shifts) {
  for (size_t i = 0; i < shifts.size(); ++i)
    for (size_t j = i + 1; j < shifts.size(); ++j)
      if (shifts[i] == shifts[j])
        raise(Errc::DuplicateShift,
              "duplicate shift c = " + to_fraction_string(shifts[i]) + " at positions " +
                  std::to_string(i + 1) + " and " + std::to_string(j + 1));
}

// Solves M x = rhs in place, exact rational Gaussian elimination with
// partial pivoting on magnitude. M is n x n, row-major.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>>& M,
                                   std::vector<Rational>& rhs) {
  const size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (abs(M[r][col]) > abs(M[piv][col])) piv = r;
    if (M[piv][col] == 0) raise(Errc::DuplicateShift, "singular moment system");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col] == 0) continue;
      Rational f = M[r][col] / M[col][col];
      for (size_t j = col; j < n; ++j) M[r][j] -= f * M[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (size_t j = i + 1; j < n; ++j) acc -= M[i][j] * x[j];
    x[i] = acc / M[i][i];
  }
  return x;
}

// c^k with the 0^0 = 1 convention used throughout the moment systems.
Rational shift_power(const Rational& c, int k) {
  if (k == 0) return Rational(1);
  return pow_rational(c, unsigned(k));
}

}  // namespace

int FractionMethod::processors() const {
  int n = 0;
  for (const auto& c : shifts)
    if (c != 0) ++n;
  return n;
}

Rational FractionMethod::taylor_coeff(int k) const {
  Rational acc = k < int(poly.size()) ? poly[size_t(k)] : Rational(0);
  for (size_t i = 0; i < shifts.size(); ++i) acc += weights[i] * shift_power(shifts[i], k);
  return acc;
}

Rational FractionMethod::constant_term() const { return taylor_coeff(0); }

Rational FractionMethod::max_coefficient() const {
  Rational m = 0;
  for (const auto& b : weights) m = std::max(m, Rational(abs(b)));
  for (const auto& d : poly) m = std::max(m, Rational(abs(d)));
  return m;
}

Rational FractionMethod::max_abs_shift() const {
  Rational m = 0;
  for (const auto& c : shifts) m = std::max(m, Rational(abs(c)));
  return m;
}

std::vector<Rational> solve_weights(std::span<const Rational> shifts_in, const CoeffSeries& series,
                                    int order) {
  if (order < 0) raise(Errc::BadArgument, "order must be >= 0");
  if (shifts_in.size() != size_t(order) + 1)
    raise(Errc::LengthMismatch, "need order + 1 = " + std::to_string(order + 1) + " shifts, got " +
                                    std::to_string(shifts_in.size()));
  const std::vector<Rational> shifts = canonical_copy(shifts_in);
  check_distinct(shifts);
  const size_t n = shifts.size();
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) M[k][i] = shift_power(shifts[i], int(k));
    rhs[k] = series.coeff(int(k));
  }
  return solve_linear(M, rhs);
}

void verify_sum_rules(const FractionMethod& method, const CoeffSeries& series) {
  for (int k = 0; k <= method.order; ++k) {
    if (method.taylor_coeff(k) != series.coeff(k))
      raise(Errc::LengthMismatch,
            "sum rule violated at k = " + std::to_string(k) + " for method " + method.name);
  }
}

FractionMethod build_plain(std::span<const Rational> shifts_in, const CoeffSeries& series,
                           int order, std::string name) {
  FractionMethod m;
  m.name = std::move(name);
  m.function = series.function();
  m.shifts = canonical_copy(shifts_in);
  m.weights = solve_weights(m.shifts, series, order);
  m.order = order;
  verify_sum_rules(m, series);
  return m;
}

FractionMethod build_hybrid(std::span<const Rational> shifts_in,
                            const std::map<int, Rational>& free_weights_in,
                            const CoeffSeries& series, int order, std::string name) {
  const std::vector<Rational> shifts = canonical_copy(shifts_in);
  check_distinct(shifts);
  for (const auto& c : shifts)
    if (c == 0) raise(Errc::BadArgument, "hybrid methods need nonzero shifts");
  std::map<int, Rational> free_weights = free_weights_in;
  for (auto& [idx, val] : free_weights) {
    if (idx < 1 || idx > int(shifts.size()))
      raise(Errc::UnderDetermined, "free weight index " + std::to_string(idx) + " out of range");
    val.canonicalize();
  }

  const int n_constrained = int(shifts.size()) - int(free_weights.size());
  if (n_constrained != order - 2)
    raise(Errc::UnderDetermined,
          "hybrid system needs order - 2 = " + std::to_string(order - 2) +
              " constrained weights, got " + std::to_string(n_constrained));

  std::vector<size_t> constrained;
  for (size_t i = 0; i < shifts.size(); ++i)
    if (!free_weights.count(int(i) + 1)) constrained.push_back(i);

  // sum_i b_i c_i^k = a_k for k = 3..order determines the constrained b_i.
  const size_t n = constrained.size();
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (size_t row = 0; row < n; ++row) {
    int k = 3 + int(row);
    Rational r = series.coeff(k);
    for (const auto& [idx, val] : free_weights) r -= val * shift_power(shifts[size_t(idx - 1)], k);
    rhs[row] = r;
    for (size_t j = 0; j < n; ++j) M[row][j] = shift_power(shifts[constrained[j]], k);
  }
  std::vector<Rational> solved = solve_linear(M, rhs);

  FractionMethod m;
  m.name = std::move(name);
  m.function = series.function();
  m.shifts.assign(shifts.begin(), shifts.end());
  m.weights.resize(shifts.size());
  for (const auto& [idx, val] : free_weights) m.weights[size_t(idx - 1)] = val;
  for (size_t j = 0; j < n; ++j) m.weights[constrained[j]] = solved[j];
  m.poly.resize(3);
  for (int k = 0; k < 3; ++k) {
    Rational acc = series.coeff(k);
    for (size_t i = 0; i < m.shifts.size(); ++i) acc -= m.weights[i] * shift_power(m.shifts[i], k);
    m.poly[size_t(k)] = acc;
  }
  m.order = order;
  verify_sum_rules(m, series);
  return m;
}

FractionMethod to_residual_form(const FractionMethod& method) {
  FractionMethod m = method;
  m.form = EvalForm::Residual;
  return m;
}

FractionMethod to_plain_form(const FractionMethod& method) {
  FractionMethod m = method;
  m.form = EvalForm::Plain;
  return m;
}

std::vector<Rational> taylor_expansion_of_method(const FractionMethod& method, int k_max) {
  if (k_max < 0) raise(Errc::BadArgument, "k_max must be >= 0");
  std::vector<Rational> out(size_t(k_max) + 1);
  std::vector<Rational> powers(method.shifts.size(), Rational(1));  // c_i^k, 0^0 = 1
  for (int k = 0; k <= k_max; ++k) {
    Rational acc = k < int(method.poly.size()) ? method.poly[size_t(k)] : Rational(0);
    for (size_t i = 0; i < method.shifts.size(); ++i) acc += method.weights[i] * powers[i];
    out[size_t(k)] = acc;
    for (size_t i = 0; i < method.shifts.size(); ++i) powers[i] *= method.shifts[i];
  }
  return out;
}

MethodTemplate frac4_template() {
  MethodTemplate t;
  t.name = "frac4";
  t.shift_pattern = [](const Rational& a) {
    return std::vector<Rational>{0, 1 / a, -1 / a, 1 / (2 * a), -1 / (2 * a)};
  };
  return t;
}

MethodTemplate frac8_template() {
  MethodTemplate t;
  t.name = "frac8";
  t.shift_pattern = [](const Rational& a) {
    return std::vector<Rational>{0,           1 / a,        -1 / a,      2 / (3 * a),
                                 -2 / (3 * a), 1 / (2 * a), -1 / (2 * a), 2 / (5 * a),
                                 -2 / (5 * a)};
  };
  return t;
}

AlphaScanResult optimize_alpha(const MethodTemplate& tmpl, const CoeffSeries& series, int order,
                               double tol, std::span<const Rational> alpha_grid) {
  if (alpha_grid.empty()) raise(Errc::BadArgument, "alpha grid is empty");
  AlphaScanResult best;
  bool have = false;
  for (const Rational& alpha : alpha_grid) {
    if (alpha <= 0) raise(Errc::BadArgument, "alpha must be positive");
    std::vector<Rational> shifts = tmpl.shift_pattern(alpha);
    FractionMethod m = build_plain(shifts, series, order,
                                   tmpl.name + "_a" + to_fraction_string(alpha));
    double th = theta(m, series, tol).theta;
    if (!have || th > best.theta) {
      best = AlphaScanResult{alpha, std::move(m), th};
      have = true;
    }
  }
  return best;
}

std::string method_card(const FractionMethod& method) {
  std::ostringstream os;
  os << "method " << method.name << "\n";
  os << "function " << method.function.name() << "\n";
  os << "order " << method.order << "\n";
  os << "processors " << method.processors() << "\n";
  os << "form " << (method.form == EvalForm::Plain ? "plain" : "residual") << "\n";
  for (size_t i = 0; i < method.shifts.size(); ++i)
    os << "shift " << i + 1 << " " << to_fraction_string(method.shifts[i]) << " "
       << format_sig17(to_double_nearest(method.shifts[i])) << "\n";
  for (size_t i = 0; i < method.weights.size(); ++i)
    os << "weight " << i + 1 << " " << to_fraction_string(method.weights[i]) << " "
       << format_sig17(to_double_nearest(method.weights[i])) << "\n";
  for (size_t k = 0; k < method.poly.size(); ++k)
    os << "poly " << k << " " << to_fraction_string(method.poly[k]) << " "
       << format_sig17(to_double_nearest(method.poly[k])) << "\n";
  for (const auto& note : method.notes) os << "note " << note << "\n";
  return os.str();
}

namespace {

struct PublishedSet {
  std::vector<const char*> weights;
  std::vector<const char*> poly;
};

void cross_check(FractionMethod& m, const PublishedSet& published) {
  auto check = [&m](const std::string& label, const Rational& computed, const char* text) {
    Rational expect = rational_from_string(text);
    if (computed != expect)
      m.notes.push_back("published " + label + " = " + text + " differs from recomputed " +
                        to_fraction_string(computed) + "; recomputed value is used");
  };
  for (size_t i = 0; i < published.weights.size() && i < m.weights.size(); ++i)
    check("b" + std::to_string(i + 1), m.weights[i], published.weights[i]);
  for (size_t k = 0; k < published.poly.size() && k < m.poly.size(); ++k)
    check("d" + std::to_string(k), m.poly[k], published.poly[k]);
}

std::vector<Rational> rats(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(rational_from_string(t));
  return out;
}

FractionMethod make_catalog_entry(std::string_view name) {
  if (name == "R4") {
    auto shifts = frac4_template().shift_pattern(Rational(5));
    FractionMethod m = build_plain(shifts, CoeffSeries(FunctionId::exp()), 4, "R4");
    cross_check(m, {{"128/3", "85/3", "20/9", "-515/9", "-15"}, {}});
    return m;
  }
  if (name == "R4_phi1") {
    auto shifts = frac4_template().shift_pattern(Rational(6));
    FractionMethod m = build_plain(shifts, CoeffSeries(FunctionId::phi(1)), 4, "R4_phi1");
    cross_check(m, {{"71/5", "117/10", "7/10", "-104/5", "-24/5"}, {}});
    return m;
  }
  if (name == "R5") {
    auto shifts = rats({"0", "1/3", "1/4", "1/5", "1/6", "1/7"});
    FractionMethod m = build_plain(shifts, CoeffSeries(FunctionId::exp()), 5, "R5");
    cross_check(m, {{"-43/12", "81/32", "-704/9", "23125/48", "-810", "117649/288"}, {}});
    return m;
  }
  if (name == "R8") {
    auto shifts = frac8_template().shift_pattern(Rational(5));
    FractionMethod m = build_plain(shifts, CoeffSeries(FunctionId::exp()), 8, "R8");
    cross_check(m, {{"-9979069/32256", "-1995521/254016", "-392009/254016", "520866369/802816",
                     "48898161/802816", "-26686735/11907", "-3892615/11907",
                     "353067578125/195084288", "71873828125/195084288"},
                    {}});
    return m;
  }
  if (name == "R10star") {
    std::vector<Rational> shifts;
    for (int i = 1; i <= 10; ++i) shifts.push_back(Rational(1, 6 + i));
    std::map<int, Rational> free{{9, Rational(-50000)}, {10, Rational(350000)}};
    FractionMethod m =
        build_hybrid(shifts, free, CoeffSeries(FunctionId::exp()), 10, "R10star");
    cross_check(m, {{"-2385751622325187262153/1585084524134400000", "3752603696192081/82668600000",
                     "-87230538798639033213/187904819200000", "14789110319838821875/6934744793088",
                     "-10558563753676365149296981/2219118333788160000", "3520134037769971/716800000",
                     "-2263057299714115181019509/1585084524134400000",
                     "-2275831141003773874927/3095868211200000"},
                    {"-34244933704346617/14676708556800", "-18541933026870559/428070666240000",
                     "-6798371473106351/15410543984640000"}});
    return m;
  }
  if (name == "R10") {
    std::vector<Rational> shifts;
    for (int i = 1; i <= 5; ++i) {
      shifts.push_back(Rational(-1, 6 + 2 * i));
      shifts.push_back(Rational(1, 6 + 2 * i));
    }
    std::map<int, Rational> free{{9, Rational(2000)}, {10, Rational(-3500)}};
    FractionMethod m = build_hybrid(shifts, free, CoeffSeries(FunctionId::exp()), 10, "R10");
    cross_check(m, {{"-57383239/760320", "-115498838729/239500800", "1648441938671875/1255673954304",
                     "56790060546875/4227858432", "-1476772203681/298188800",
                     "-31012455666807/656015360", "4891212112962371/1295536619520",
                     "171190903245297593/3886609858560"},
                    {"-781562376863/94371840", "-54849495983/330301440", "-8034429391/587202560"}});
    return m;
  }
  raise(Errc::UnknownMethod, "unknown catalog method: " + std::string(name));
}

}  // namespace

const FractionMethod& catalog(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, FractionMethod> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(std::string(name));
  if (it != cache.end()) return it->second;
  FractionMethod m = make_catalog_entry(name);
  return cache.emplace(std::string(name), std::move(m)).first->second;
}

std::vector<std::string> catalog_names() {
  return {"R4", "R4_phi1", "R5", "R8", "R10star", "R10"};
}

}  // namespace parfrac
