#include <doctest.h>

#include <cmath>
#include <sstream>

#include "parfrac/cli.hpp"
#include "parfrac/error.hpp"
#include "parfrac/rng.hpp"

using namespace parfrac;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("matrix generators") {
  // cauchy entries A_ij = 1/(1 + (i-j)^2), independent of the seed
  DenseMatrix c = make_dense_matrix({MatrixSpec::Kind::Cauchy, 6, 9});
  CHECK(c.at(0, 0) == 1.0);
  CHECK(c.at(0, 1) == 0.5);
  CHECK(c.at(5, 1) == 1.0 / 17.0);
  CHECK(c.at(1, 5) == c.at(5, 1));

  // trid121 structure
  TridiagMatrix t = make_tridiag_matrix({MatrixSpec::Kind::Trid121, 5, 0});
  CHECK(t.diag == std::vector<double>{2, 2, 2, 2, 2});
  CHECK(t.sub == std::vector<double>{-1, -1, -1, -1});
  CHECK_THROWS_AS(make_tridiag_matrix({MatrixSpec::Kind::Randn, 5, 0}), Error);

  // randn is seed deterministic and seed sensitive
  DenseMatrix a1 = make_dense_matrix({MatrixSpec::Kind::Randn, 8, 5});
  DenseMatrix a2 = make_dense_matrix({MatrixSpec::Kind::Randn, 8, 5});
  DenseMatrix a3 = make_dense_matrix({MatrixSpec::Kind::Randn, 8, 6});
  bool same = true, differs = false;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      same = same && a1.at(i, j) == a2.at(i, j);
      differs = differs || a1.at(i, j) != a3.at(i, j);
    }
  CHECK(same);
  CHECK(differs);

  // normal samples have plausible first and second moments
  NormalSampler normal(123);
  double mean = 0, var = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double x = normal.next();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  std::vector<double> v = random_unit_vector(100, 3);
  double norm = 0;
  for (double e : v) norm += e * e;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log grid") {
  std::vector<double> g = log_grid(1e-2, 4.0, 40);
  CHECK(g.size() == 40);
  CHECK(g.front() == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(4.0));
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), Error);
}

TEST_CASE("build command prints method cards") {
  BuildRequest req;
  req.function = FunctionId::exp();
  req.shifts = {Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5), Rational(1, 6)};
  req.order = 4;
  std::string card = cmd_build(req);
  CHECK(card.find("weight 1 1/3") != std::string::npos);
  CHECK(card.find("weight 2 -18") != std::string::npos);
  CHECK(card.find("weight 3 128") != std::string::npos);
  CHECK(card.find("weight 4 -625/3") != std::string::npos);
  CHECK(card.find("weight 5 99") != std::string::npos);

  BuildRequest one;
  one.shifts = {Rational(0)};
  one.order = 0;
  CHECK(cmd_build(one).find("weight 1 1 1\n") != std::string::npos);

  BuildRequest phi;
  phi.function = FunctionId::phi(1);
  phi.shifts = req.shifts;
  phi.order = 4;
  CHECK(cmd_build(phi).find("45/2") != std::string::npos);

  BuildRequest tmpl;
  tmpl.template_name = "frac4";
  tmpl.alpha = 5;
  tmpl.order = 4;
  std::string tcard = cmd_build(tmpl);
  CHECK(tcard.find("-515/9") != std::string::npos);

  BuildRequest hybrid;
  for (int i = 1; i <= 10; ++i) hybrid.shifts.push_back(Rational(1, 6 + i));
  hybrid.free_weights = {{9, Rational(-50000)}, {10, Rational(350000)}};
  hybrid.order = 10;
  CHECK(cmd_build(hybrid).find("3752603696192081/82668600000") != std::string::npos);

  BuildRequest bad;
  bad.template_name = "frac4";
  bad.shifts = {Rational(0)};
  bad.order = 4;
  CHECK_THROWS_AS(cmd_build(bad), Error);
}

TEST_CASE("theta command emits exact tolerances and saturation flags") {
  ThetaRequest req;
  req.methods = {"R5", "taylor5"};
  req.tols = {5.9604644775390625e-8};
  std::string csv = cmd_theta(req);
  CHECK(first_line(csv) == "method,tol,theta,theta_3dp,saturated");
  CHECK(csv.find("R5,5.9604644775390625e-8,") != std::string::npos);
  CHECK(csv.find(",0.298,0") != std::string::npos);   // R5 rounded to 3 decimals
  CHECK(csv.find(",0.186,0") != std::string::npos);   // taylor5

  ThetaRequest sat;
  sat.methods = {"R5"};
  sat.tols = {1e12};
  CHECK(cmd_theta(sat).find(",1\n") != std::string::npos);

  ThetaRequest eps;
  eps.methods = {"R4", "pade4"};
  eps.eps_grid = log_grid(0.1, 1.0, 5);
  std::string etable = cmd_theta(eps);
  CHECK(first_line(etable) == "method,x,epsilon");
  CHECK(count_lines(etable) == 1 + 10);

  CHECK_THROWS_AS(cmd_theta({}), Error);
}

TEST_CASE("bench dense CSV shape and determinism") {
  BenchRequest req;
  req.matrix = {MatrixSpec::Kind::Randn, 16, 7};
  req.methods = {"R4", "pade4", "R4_phi1", "pade4_phi1"};
  req.h_norm_grid = {0.3, 0.9, 2.0};
  req.oracle_digits = 30;
  std::string w1 = cmd_bench_dense(req);
  CHECK(first_line(w1) ==
        "method,h_norm,error_2norm,serial_cost_product_eq,parallel_cost_product_eq");
  CHECK(count_lines(w1) == 1 + 4 * 3);
  CHECK(w1.find("R4,0.29999999999999999,") != std::string::npos);

  req.workers = 2;
  CHECK(cmd_bench_dense(req) == w1);
  req.workers = 8;
  CHECK(cmd_bench_dense(req) == w1);

  // rows appear grouped by method in request order
  std::istringstream in(w1);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("R4,", 0) == 0);

  // product-equivalent costs: R4 serial 4*(4/3), pade4 1 + 4/3
  CHECK(w1.find("," + format_sig17(4 * (4.0 / 3.0)) + "," + format_sig17(4.0 / 3.0)) !=
        std::string::npos);
  CHECK(w1.find("," + format_sig17(1 + 4.0 / 3.0)) != std::string::npos);
}

TEST_CASE("bench action CSV shape and determinism") {
  BenchRequest req;
  req.matrix = {MatrixSpec::Kind::Trid121, 64, 11};
  req.methods = {"R10:residual", "R10", "taylor10"};
  req.h_norm_grid = {0.1, 1.0};
  req.oracle_digits = 30;
  std::string w1 = cmd_bench_action(req);
  CHECK(first_line(w1) ==
        "method,h_norm,error_2norm,serial_cost_matvec_eq,parallel_cost_matvec_eq");
  CHECK(count_lines(w1) == 1 + 3 * 2);

  req.workers = 2;
  CHECK(cmd_bench_action(req) == w1);
  req.workers = 8;
  CHECK(cmd_bench_action(req) == w1);

  // costs: R10 plain (18, 2), R10 residual ((10*13+10)/5 = 28, 13/5), taylor10 (10, 10)
  CHECK(w1.find("R10:residual,") != std::string::npos);
  CHECK(w1.find(",28," + format_sig17(13.0 / 5.0)) != std::string::npos);
  CHECK(w1.find(",18,2\n") != std::string::npos);
  CHECK(w1.find(",10,10\n") != std::string::npos);

  // validation: dense matrix kinds are rejected
  BenchRequest bad = req;
  bad.matrix.kind = MatrixSpec::Kind::Cauchy;
  CHECK_THROWS_AS(cmd_bench_action(bad), Error);
  // phi1 methods target a different function
  BenchRequest wrong = req;
  wrong.methods = {"R4_phi1"};
  CHECK_THROWS_AS(cmd_bench_action(wrong), Error);
}

TEST_CASE("cost curve CSV") {
  CostCurveRequest req;
  req.norms = {0.1, 1.2};
  std::string csv = cmd_cost_curve(req);
  CHECK(first_line(csv) ==
        "norm_1norm,taylor_cost_matvec_eq,frac_serial_cost_matvec_eq,frac_parallel_cost_matvec_eq");
  CHECK(count_lines(csv) == 3);
  CHECK(csv.find(",5,8,1.6000000000000001\n") != std::string::npos);
  CHECK(csv.find(",15,18,2\n") != std::string::npos);

  CostCurveRequest empty;
  std::string ecsv = cmd_cost_curve(empty);
  CHECK(count_lines(ecsv) == 1);  // header only

  CostCurveRequest bad;
  bad.norms = {1.0};
  bad.tol = -1;
  CHECK_THROWS_AS(cmd_cost_curve(bad), Error);
}

TEST_CASE("17 significant digit rendering") {
  CHECK(format_sig17(0.3) == "0.29999999999999999");
  CHECK(format_sig17(1.6) == "1.6000000000000001");
  CHECK(format_sig17(2.0) == "2");
}

TEST_SUITE_END();
