// Command-line driver: builds approximants, prints theta tables, and runs
// the dense / action benchmarks as CSV.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "parfrac/cli.hpp"
#include "parfrac/error.hpp"

namespace {

using namespace parfrac;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) raise(Errc::BadArgument, "cannot open output file: " + out_path);
  f << text;
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) out.push_back(rational_from_string(item));
  return out;
}

std::vector<double> parse_double_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(s, &pos));
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (...) {
      raise(Errc::BadArgument, "bad numeric value: " + s);
    }
  }
  return out;
}

std::map<int, Rational> parse_free_weights(const std::vector<std::string>& items) {
  std::map<int, Rational> out;
  for (const auto& s : items) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      raise(Errc::BadArgument, "free weight must be index=value, got: " + s);
    int idx = 0;
    try {
      idx = std::stoi(s.substr(0, eq));
    } catch (...) {
      raise(Errc::BadArgument, "bad free weight index in: " + s);
    }
    out[idx] = rational_from_string(s.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial-fraction approximations of matrix functions"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name
  std::string out_path;
  app.add_option("--out", out_path, "write output to a file instead of stdout")
      ->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "construct a method and print its card");
  std::string build_function = "exp", build_shifts, build_template, build_alpha = "5",
              build_name = "custom";
  int build_order = 0;
  std::vector<std::string> build_free;
  build->add_option("--function", build_function, "exp | phi<m> | log1m | cos | sin");
  build->add_option("--shifts", build_shifts, "comma list of rational shifts, e.g. 0,1/5,-1/5");
  build->add_option("--template", build_template, "frac4 | frac8 (with --alpha)");
  build->add_option("--alpha", build_alpha, "template parameter alpha");
  build->add_option("--order", build_order, "target Taylor order s")->required();
  build->add_option("--free-weight", build_free, "fixed weight index=value (repeatable)");
  build->add_option("--name", build_name, "method name for the card");

  // theta
  auto* theta_cmd = app.add_subcommand("theta", "theta thresholds (or epsilon curves) as CSV");
  std::string theta_methods = "R5,R10star";
  std::vector<std::string> theta_tols = {"5.9604644775390625e-8"};
  double eps_lo = 0, eps_hi = 0;
  int eps_points = 0;
  theta_cmd->add_option("--methods", theta_methods,
                        "catalog names, taylor<m>, pade4, pade4_phi1 (comma list)");
  theta_cmd->add_option("--tol", theta_tols, "tolerances (repeatable)");
  theta_cmd->add_option("--eps-lo", eps_lo, "epsilon mode: grid start");
  theta_cmd->add_option("--eps-hi", eps_hi, "epsilon mode: grid end");
  theta_cmd->add_option("--eps-points", eps_points, "epsilon mode: log-grid points");

  // shared bench options
  auto add_bench_options = [](CLI::App* cmd, std::string& matrix, int& dim, std::uint64_t& seed,
                              std::string& methods, double& h_lo, double& h_hi, int& h_points,
                              std::vector<std::string>& h_grid, int& workers, int& digits) {
    cmd->add_option("--matrix", matrix, "randn | cauchy | trid121");
    cmd->add_option("--dim", dim, "matrix dimension");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--methods", methods, "comma list of method tokens");
    cmd->add_option("--hnorm-min", h_lo, "smallest h*||A|| grid value");
    cmd->add_option("--hnorm-max", h_hi, "largest h*||A|| grid value");
    cmd->add_option("--hnorm-points", h_points, "log grid size");
    cmd->add_option("--hnorm", h_grid, "explicit h*||A|| values (repeatable)");
    cmd->add_option("--workers", workers, "worker threads");
    cmd->add_option("--oracle-digits", digits, "oracle precision in decimal digits");
  };

  auto* bench_dense = app.add_subcommand("bench-dense", "dense matrix benchmark as CSV");
  std::string bd_matrix = "randn", bd_methods = "R4,pade4,R8,taylor8";
  int bd_dim = 100, bd_points = 40, bd_workers = 1, bd_digits = 40;
  std::uint64_t bd_seed = 1;
  double bd_lo = 1e-2, bd_hi = 4.0;
  std::vector<std::string> bd_grid;
  add_bench_options(bench_dense, bd_matrix, bd_dim, bd_seed, bd_methods, bd_lo, bd_hi, bd_points,
                    bd_grid, bd_workers, bd_digits);

  auto* bench_action = app.add_subcommand("bench-action", "tridiagonal action benchmark as CSV");
  std::string ba_matrix = "trid121", ba_methods = "R10:residual,R10,taylor10";
  int ba_dim = 1000, ba_points = 40, ba_workers = 1, ba_digits = 40;
  std::uint64_t ba_seed = 1;
  double ba_lo = 1e-2, ba_hi = 4.0;
  std::vector<std::string> ba_grid;
  add_bench_options(bench_action, ba_matrix, ba_dim, ba_seed, ba_methods, ba_lo, ba_hi, ba_points,
                    ba_grid, ba_workers, ba_digits);

  auto* cost = app.add_subcommand("cost-curve", "method-selector cost curve as CSV");
  double cost_lo = 0.01, cost_hi = 2.0, cost_tol = 5.9604644775390625e-8;
  int cost_points = 200;
  std::vector<std::string> cost_norms;
  cost->add_option("--norm-min", cost_lo, "smallest norm");
  cost->add_option("--norm-max", cost_hi, "largest norm");
  cost->add_option("--points", cost_points, "grid size (0 for empty)");
  cost->add_option("--norm", cost_norms, "explicit norms (repeatable)");
  cost->add_option("--tol", cost_tol, "tolerance");

  try {
    app.parse(argc, argv);

    if (*build) {
      BuildRequest req;
      req.function = FunctionId::parse(build_function);
      if (!build_shifts.empty()) req.shifts = parse_rational_list(build_shifts);
      req.template_name = build_template;
      req.alpha = rational_from_string(build_alpha);
      req.order = build_order;
      req.free_weights = parse_free_weights(build_free);
      req.name = build_name;
      write_output(cmd_build(req), out_path);
    } else if (*theta_cmd) {
      ThetaRequest req;
      req.methods = split_csv(theta_methods);
      req.tols = parse_double_list(theta_tols);
      if (eps_points > 0) req.eps_grid = log_grid(eps_lo, eps_hi, eps_points);
      write_output(cmd_theta(req), out_path);
    } else if (*bench_dense) {
      BenchRequest req;
      req.matrix = {MatrixSpec::parse_kind(bd_matrix), bd_dim, bd_seed};
      req.methods = split_csv(bd_methods);
      req.h_norm_grid = bd_grid.empty() ? log_grid(bd_lo, bd_hi, bd_points)
                                        : parse_double_list(bd_grid);
      req.workers = bd_workers;
      req.oracle_digits = bd_digits;
      write_output(cmd_bench_dense(req), out_path);
    } else if (*bench_action) {
      BenchRequest req;
      req.matrix = {MatrixSpec::parse_kind(ba_matrix), ba_dim, ba_seed};
      req.methods = split_csv(ba_methods);
      req.h_norm_grid = ba_grid.empty() ? log_grid(ba_lo, ba_hi, ba_points)
                                        : parse_double_list(ba_grid);
      req.workers = ba_workers;
      req.oracle_digits = ba_digits;
      write_output(cmd_bench_action(req), out_path);
    } else if (*cost) {
      CostCurveRequest req;
      req.norms = cost_norms.empty()
                      ? (cost_points > 0 ? log_grid(cost_lo, cost_hi, cost_points)
                                         : std::vector<double>{})
                      : parse_double_list(cost_norms);
      req.tol = cost_tol;
      write_output(cmd_cost_curve(req), out_path);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, parse errors exit 2
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
