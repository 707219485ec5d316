// Command line front end: solve single problems, run the structural and
// Lojasiewicz checkers, reproduce the comparison tables, and run ODE
// convergence studies. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.

#include <CLI11.hpp>

#include "nave/harness.hpp"
#include "nave/io.hpp"
#include "nave/pstructure.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_h_list(const std::string& csv) {
  std::vector<double> hs;
  std::istringstream is(csv);
  std::string tok;
  while (std::getline(is, tok, ',')) hs.push_back(std::stod(tok));
  return hs;
}

std::string override_seed(const std::string& id, std::uint64_t seed) {
  if (id.find("seed=") == std::string::npos) return id;
  std::ostringstream out;
  std::istringstream is(id);
  std::string tok;
  bool first = true;
  while (std::getline(is, tok, ':')) {
    if (tok.rfind("seed=", 0) == 0) tok = "seed=" + std::to_string(seed);
    out << (first ? "" : ":") << tok;
    first = false;
  }
  return out.str();
}

void write_trace(const std::string& path, const nave::SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw nave::ConfigError("cannot open trace file: " + path);
  out << "k, ||H||, Theta, step, r\n" << std::setprecision(17);
  for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
    const double res = report.residual_history[k];
    const double theta = k < report.merit_history.size()
                             ? report.merit_history[k]
                             : 0.5 * res * res;
    const double step =
        k < report.step_history.size() ? report.step_history[k] : 0.0;
    const double r = k < report.r_history.size() ? report.r_history[k] : 0.0;
    out << k << ", " << res << ", " << theta << ", " << step << ", " << r
        << '\n';
  }
}

void emit_rows(const std::vector<nave::TableRow>& rows,
               const std::string& out_dir, const std::string& format,
               const std::string& stem) {
  if (out_dir.empty()) {
    if (format == "md")
      nave::emit_markdown(rows, std::cout);
    else
      nave::emit_csv(rows, std::cout);
    return;
  }
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + stem + "." + format;
  std::ofstream out(path);
  if (!out) throw nave::ConfigError("cannot open output file: " + path);
  if (format == "md")
    nave::emit_markdown(rows, out);
  else
    nave::emit_csv(rows, out);
  std::cout << "wrote " << path << '\n';
}

int cmd_solve(const std::string& id, const std::string& method_name, int theta,
              double tol, int max_iter, double eps, std::uint64_t seed,
              bool seed_given, const std::string& trace) {
  const std::string resolved = seed_given ? override_seed(id, seed) : id;
  const nave::NaveProblem problem = nave::problem_from_id(resolved);
  nave::MethodKind method;
  if (method_name == "smooth")
    method = theta == 2 ? nave::MethodKind::Theta2 : nave::MethodKind::Theta1;
  else
    method = nave::method_from_string(method_name);

  const nave::SolveReport report =
      nave::run_method(problem, method, tol, max_iter, eps);
  if (!trace.empty()) write_trace(trace, report);

  const double nave_err = nave::nave_residual(problem, report.x_final).norm();
  std::cout << "problem:    " << problem.label << '\n'
            << "method:     " << to_string(method) << '\n'
            << "status:     " << to_string(report.status) << '\n'
            << "iterations: " << report.iterations << '\n'
            << std::setprecision(6) << "time_ms:    " << report.wall_time_ms
            << '\n'
            << std::setprecision(4)
            << "residual:   " << report.residual_history.back() << '\n'
            << "nave error: " << nave_err << '\n';
  if (problem.dim <= 12)
    std::cout << "x:          " << report.x_final.transpose() << '\n';
  return report.status == nave::SolveStatus::Converged ? kExitOk
                                                       : kExitNumerical;
}

int cmd_check_p0(const std::string& matrix_file, bool strict, int trials,
                 std::uint64_t seed) {
  const nave::DenseMatrix a = nave::read_matrix_file(matrix_file);
  nave::P0Verdict verdict;
  if (a.rows() <= 16) {
    verdict = nave::is_p0_matrix_exact(a, strict);
  } else {
    verdict = nave::p0_refute_randomized(a, trials, seed);
  }
  std::cout << "verdict: " << to_string(verdict.kind)
            << " (minors checked: " << verdict.minors_checked << ")\n";
  if (verdict.certificate) {
    const auto& cert = *verdict.certificate;
    if (!cert.index_set.empty()) {
      std::cout << "certificate minor I = {";
      for (std::size_t i = 0; i < cert.index_set.size(); ++i)
        std::cout << (i ? "," : "") << cert.index_set[i] + 1;
      std::cout << "} with det(A_II) = " << cert.value << '\n';
    }
    if (cert.vector.size() > 0)
      std::cout << "certificate v = " << cert.vector.transpose()
                << " with max_j (Av)^j v^j = " << cert.value << '\n';
  }
  return kExitOk;
}

int cmd_check_loja(const std::string& family, double grid_max, int points,
                   const std::string& out_file) {
  nave::SmoothingFamily fam;
  if (family == "theta1")
    fam = nave::make_theta1();
  else if (family == "theta2")
    fam = nave::make_theta2();
  else if (family == "logexp-counterexample")
    fam = nave::make_log_counterexample();
  else
    throw nave::ConfigError("unknown family `" + family + "`");

  const std::vector<double> grid =
      nave::geometric_grid(1.1, grid_max, points);
  const nave::LojaReport report = nave::loja_verdict(fam, grid);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file);
    if (!file) throw nave::ConfigError("cannot open " + out_file);
    os = &file;
  }
  *os << "x,ratio\n" << std::setprecision(17);
  for (const auto& [x, ratio] : report.ratio_samples)
    *os << x << ',' << ratio << '\n';
  *os << "# verdict," << to_string(report.verdict)
      << ",liminf_estimate," << report.liminf_estimate;
  if (report.condition_ii_witness)
    *os << ",witness(m n R)," << report.condition_ii_witness->m << ' '
        << report.condition_ii_witness->n << ' '
        << report.condition_ii_witness->big_r;
  *os << '\n';
  if (!out_file.empty()) std::cout << "wrote " << out_file << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear absolute value equation solver toolkit"};
  app.require_subcommand(1);

  // ---- solve -------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "solve one problem instance");
  std::string solve_id, solve_method = "smooth", solve_trace;
  int solve_theta = 1, solve_max_iter = 2000;
  double solve_tol = 1e-10, solve_eps = 1.0;
  std::uint64_t solve_seed = 42;
  solve->add_option("--problem", solve_id, "problem id")->required();
  solve->add_option("--method", solve_method, "smooth|softmax|ip")
      ->check(CLI::IsMember({"smooth", "softmax", "ip", "theta1", "theta2"}));
  solve->add_option("--theta", solve_theta, "smoothing kernel (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  solve->add_option("--tol", solve_tol, "stopping tolerance");
  solve->add_option("--max-iter", solve_max_iter, "iteration cap");
  solve->add_option("--eps", solve_eps, "r-equation coefficient");
  auto* seed_opt =
      solve->add_option("--seed", solve_seed, "instance seed override");
  solve->add_option("--trace", solve_trace, "write per-iteration trace file");

  // ---- check -------------------------------------------------------------
  auto* check = app.add_subcommand("check", "structural checkers");
  check->require_subcommand(1);
  auto* p0 = check->add_subcommand("p0", "P0/P matrix test");
  std::string p0_matrix;
  bool p0_strict = false;
  int p0_trials = 1000;
  std::uint64_t p0_seed = 42;
  p0->add_option("--matrix", p0_matrix, "matrix file (dims: header format)")
      ->required();
  p0->add_flag("--strict", p0_strict, "test the strict P property");
  p0->add_option("--trials", p0_trials, "randomized trials for d > 16");
  p0->add_option("--seed", p0_seed, "randomized test seed");

  auto* loja = check->add_subcommand("loja", "Lojasiewicz-at-infinity check");
  std::string loja_family, loja_out_format = "csv", loja_out_file;
  double loja_grid_max = 1e6;
  int loja_points = 200;
  loja->add_option("--family", loja_family,
                   "theta1|theta2|logexp-counterexample")
      ->required();
  auto* grid_max_opt =
      loja->add_option("--grid-max", loja_grid_max, "largest grid abscissa");
  loja->add_option("--grid-points", loja_points, "geometric grid size");
  loja->add_option("--out", loja_out_format, "output format (csv)")
      ->check(CLI::IsMember({"csv"}));
  loja->add_option("--out-file", loja_out_file, "write csv here");

  // ---- table -------------------------------------------------------------
  auto* table = app.add_subcommand("table", "method comparison tables");
  table->require_subcommand(1);
  auto* methods = table->add_subcommand("methods", "four-method table");
  std::string methods_spec, methods_out, methods_format = "csv";
  std::uint64_t methods_seed = 42;
  methods->add_option("--spec", methods_spec, "experiment spec file");
  methods->add_option("--out", methods_out, "output directory");
  methods->add_option("--format", methods_format, "csv|md")
      ->check(CLI::IsMember({"csv", "md"}));
  methods->add_option("--seed", methods_seed, "master seed for instances");

  auto* ridge = table->add_subcommand("ridge", "ridge comparison table");
  std::string ridge_grid, ridge_out, ridge_format = "csv";
  std::uint64_t ridge_seed = 42;
  ridge->add_option("--grid", ridge_grid, "grid file: lam= mu= m= d= lines");
  ridge->add_option("--out", ridge_out, "output directory");
  ridge->add_option("--format", ridge_format, "csv|md")
      ->check(CLI::IsMember({"csv", "md"}));
  ridge->add_option("--seed", ridge_seed, "master seed for instances");

  // ---- ode ---------------------------------------------------------------
  auto* ode = app.add_subcommand("ode", "finite-difference ODE studies");
  ode->require_subcommand(1);
  struct OdeArgs {
    bool rates = false;
    std::string h_list;
    double h = 0.0, t_end = 0.0, x0 = 0.0;
    int theta = 1;
    std::string out;
  };
  std::map<std::string, OdeArgs> ode_args;
  for (const char* name : {"stiff", "bvp", "arctan"}) {
    auto* sub = ode->add_subcommand(name);
    auto& args = ode_args[name];
    sub->add_flag("--rates", args.rates, "run a convergence-rate study");
    sub->add_option("--h-list", args.h_list, "comma separated mesh sizes");
    sub->add_option("--h", args.h, "single mesh size");
    sub->add_option("--T", args.t_end, "time horizon");
    sub->add_option("--x0", args.x0, "initial value");
    sub->add_option("--theta", args.theta, "smoothing kernel (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    sub->add_option("--out", args.out, "write (h, error) data file here");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve)
      return cmd_solve(solve_id, solve_method, solve_theta, solve_tol,
                       solve_max_iter, solve_eps, solve_seed,
                       seed_opt->count() > 0, solve_trace);
    if (*p0) return cmd_check_p0(p0_matrix, p0_strict, p0_trials, p0_seed);
    if (*loja) {
      // theta2's psi underflows past x ~ 745; keep its default tail below.
      if (grid_max_opt->count() == 0 && loja_family == "theta2")
        loja_grid_max = 500.0;
      return cmd_check_loja(loja_family, loja_grid_max, loja_points,
                            loja_out_file);
    }

    if (*methods) {
      std::vector<nave::ExperimentSpec> specs;
      if (methods_spec.empty()) {
        specs = nave::default_table2_specs(methods_seed);
      } else {
        std::ifstream in(methods_spec);
        if (!in)
          throw nave::ConfigError("cannot open spec file: " + methods_spec);
        specs = nave::parse_spec_file(in);
      }
      emit_rows(nave::run_methods_table(specs), methods_out, methods_format,
                "methods");
      return kExitOk;
    }
    if (*ridge) {
      std::vector<nave::RidgeCell> cells;
      if (ridge_grid.empty()) {
        cells = nave::default_table1_cells();
      } else {
        std::ifstream in(ridge_grid);
        if (!in)
          throw nave::ConfigError("cannot open grid file: " + ridge_grid);
        std::string line;
        while (std::getline(in, line)) {
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          nave::RidgeCell cell{};
          std::istringstream ls(line);
          std::string tok;
          while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
              throw nave::ConfigError("ridge grid: expected key=value");
            const std::string key = tok.substr(0, eq);
            const double val = std::stod(tok.substr(eq + 1));
            if (key == "lam")
              cell.lambda_bar = val;
            else if (key == "mu")
              cell.mu_bar = val;
            else if (key == "m")
              cell.m = static_cast<int>(val);
            else if (key == "d")
              cell.d = static_cast<int>(val);
            else
              throw nave::ConfigError("ridge grid: unknown key " + key);
          }
          cells.push_back(cell);
        }
      }
      emit_rows(nave::run_ridge_table(cells, ridge_seed), ridge_out,
                ridge_format, "ridge");
      return kExitOk;
    }

    for (const char* name : {"stiff", "bvp", "arctan"}) {
      if (!ode->got_subcommand(name)) continue;
      auto args = ode_args[name];
      const std::string kind = name;
      // Defaults per study: the published setups.
      if (kind == "stiff") {
        if (args.t_end == 0.0) args.t_end = args.rates ? 1.0 : 5.0;
        if (args.x0 == 0.0) args.x0 = args.rates ? -2.0 : -1.0;
        if (args.h == 0.0) args.h = 0.05;
      } else if (kind == "bvp") {
        if (args.t_end == 0.0) args.t_end = 2.0;
        if (args.x0 == 0.0) args.x0 = -1.0;
        if (args.h == 0.0) args.h = 0.05;
      } else {
        if (args.t_end == 0.0) args.t_end = 1.0;
        if (args.x0 == 0.0) args.x0 = 1.0;
        if (args.h == 0.0) args.h = 0.0125;
      }
      auto builder = [&](double h) {
        const int n = static_cast<int>(std::lround(args.t_end / h));
        if (kind == "stiff") return nave::make_stiff_ivp(args.x0, args.t_end, n);
        if (kind == "bvp")
          return nave::make_stiff_bvp(
              args.x0, nave::stiff_exact(args.t_end, args.x0), args.t_end, n);
        return nave::make_arctan_ivp(args.x0, args.t_end, n);
      };
      const nave::MethodKind method = args.theta == 2
                                          ? nave::MethodKind::Theta2
                                          : nave::MethodKind::Theta1;
      if (args.rates) {
        std::vector<double> hs = args.h_list.empty()
                                     ? std::vector<double>{0.1, 0.05, 0.025,
                                                           0.0125}
                                     : parse_h_list(args.h_list);
        const nave::ConvergenceStudy study =
            nave::convergence_study(builder, hs, method);
        if (args.out.empty()) {
          nave::emit_study(study, std::cout);
        } else {
          std::ofstream out(args.out);
          if (!out) throw nave::ConfigError("cannot open " + args.out);
          nave::emit_study(study, out);
          std::cout << "wrote " << args.out << '\n';
        }
        std::cout << "slope: " << study.slope << '\n';
        return kExitOk;
      }
      const nave::OdeNave ode_problem = builder(args.h);
      const nave::SolveReport report =
          nave::run_method(ode_problem.problem, method, 1e-10, 2000, 1.0);
      if (report.status != nave::SolveStatus::Converged) {
        std::cerr << "solve failed: " << to_string(report.status) << '\n';
        return kExitNumerical;
      }
      std::cout << "h: " << args.h << "  error_inf: "
                << nave::ode_error_inf(ode_problem, report.x_final)
                << "  iterations: " << report.iterations << '\n';
      return kExitOk;
    }
    throw nave::ConfigError("no subcommand selected");
  } catch (const nave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nave::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
