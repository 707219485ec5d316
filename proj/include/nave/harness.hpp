#pragma once

#include "nave/baselines.hpp"
#include "nave/core.hpp"
#include "nave/problems.hpp"
#include "nave/rng.hpp"
#include "nave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

/// Experiment runner: method-comparison tables, ridge tables, ODE
/// convergence studies, CSV/Markdown emission. Deterministic for fixed
/// seeds; every cell keeps its raw SolveReports for audit.
namespace nave {

enum class MethodKind { Theta1, Theta2, Softmax, InteriorPoint };

inline const char* to_string(MethodKind m) {
  switch (m) {
    case MethodKind::Theta1: return "theta1";
    case MethodKind::Theta2: return "theta2";
    case MethodKind::Softmax: return "softmax";
    case MethodKind::InteriorPoint: return "ip";
  }
  return "?";
}

inline MethodKind method_from_string(const std::string& s) {
  if (s == "theta1") return MethodKind::Theta1;
  if (s == "theta2") return MethodKind::Theta2;
  if (s == "softmax") return MethodKind::Softmax;
  if (s == "ip") return MethodKind::InteriorPoint;
  throw ConfigError("unknown method `" + s + "`");
}

/// One table row request: a problem id, the methods to run on it, and the
/// shared solver knobs.
struct ExperimentSpec {
  std::string problem_id;
  std::vector<MethodKind> methods;
  double tol = 1e-10;
  int max_iter = 2000;
  double eps = 1.0;
  std::uint64_t seed = 42;
  int repetitions = 1;
};

struct MethodResult {
  double error = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double time_ms = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<SolveReport> reports;  // one per repetition, retained for audit
};

struct TableRow {
  std::string label;
  std::map<MethodKind, MethodResult> results;
};

/// Dispatch one solve. The seed only enters through problem generation.
inline SolveReport run_method(const NaveProblem& p, MethodKind method,
                              double tol, int max_iter, double eps) {
  switch (method) {
    case MethodKind::Theta1:
    case MethodKind::Theta2: {
      SolverConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      cfg.epsilon = eps;
      cfg.family =
          method == MethodKind::Theta1 ? make_theta1() : make_theta2();
      return newton_armijo_solve(p, cfg);
    }
    case MethodKind::Softmax: {
      BaselineConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      return solve_softmax(p, cfg);
    }
    case MethodKind::InteriorPoint: {
      BaselineConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      return solve_interior_point(p, cfg);
    }
  }
  throw ConfigError("unhandled method");
}

namespace detail {

inline double reported_error(const SolveReport& r) {
  // Mirror the reference tables: breakdowns print a NaN error.
  if (r.status == SolveStatus::DomainBreakdown)
    return std::numeric_limits<double>::quiet_NaN();
  return r.residual_history.empty()
             ? std::numeric_limits<double>::quiet_NaN()
             : r.residual_history.back();
}

// Median that keeps the value attached to an actual run (lower median).
template <typename Get>
const SolveReport& median_report(const std::vector<SolveReport>& reports,
                                 Get get) {
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return get(reports[a]) < get(reports[b]);
  });
  return reports[order[(order.size() - 1) / 2]];
}

inline std::uint64_t rep_seed(const ExperimentSpec& spec, int rep) {
  return rep == 0 ? spec.seed
                  : derive_seed(spec.seed,
                                spec.problem_id + "#rep" + std::to_string(rep));
}

// Re-seed the instance for a repetition by rewriting the id's seed field.
inline std::string with_seed(const std::string& id, std::uint64_t seed) {
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

inline void validate(const ExperimentSpec& spec) {
  if (spec.methods.empty())
    throw ConfigError(spec.problem_id + ": no methods requested");
  if (spec.repetitions < 1)
    throw ConfigError(spec.problem_id + ": repetitions must be >= 1");
  if (spec.tol <= 0.0) throw ConfigError(spec.problem_id + ": tol must be > 0");
  problem_from_id(spec.problem_id);  // resolvable, or throws ConfigError
}

}  // namespace detail

/// Run every spec against every requested method. All specs are validated
/// before any solve starts, so an invalid spec cannot leave a partial
/// table behind. With repetitions > 1 the instance seed is re-derived per
/// repetition and the reported error/iterations are the median run's.
inline std::vector<TableRow> run_methods_table(
    const std::vector<ExperimentSpec>& specs) {
  for (const auto& spec : specs) detail::validate(spec);

  std::vector<TableRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    TableRow row;
    row.label = spec.problem_id;
    for (MethodKind method : spec.methods) {
      MethodResult cell;
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        const std::string rep_id = detail::with_seed(
            spec.problem_id, detail::rep_seed(spec, rep));
        const NaveProblem p = problem_from_id(rep_id);
        cell.reports.push_back(
            run_method(p, method, spec.tol, spec.max_iter, spec.eps));
      }
      const SolveReport& med = detail::median_report(
          cell.reports, [](const SolveReport& r) {
            const double e = detail::reported_error(r);
            return std::isnan(e) ? std::numeric_limits<double>::infinity() : e;
          });
      cell.error = detail::reported_error(med);
      cell.iterations = med.iterations;
      cell.time_ms = med.wall_time_ms;
      cell.status = med.status;
      for (const auto& r : cell.reports)
        if (r.status != SolveStatus::Converged) cell.status = r.status;
      if (std::all_of(cell.reports.begin(), cell.reports.end(),
                      [](const SolveReport& r) {
                        return r.status == SolveStatus::Converged;
                      }))
        cell.status = SolveStatus::Converged;
      row.results[method] = std::move(cell);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct RidgeCell {
  double lambda_bar;
  double mu_bar;
  int m;
  int d;
};

/// Ridge comparison rows: both smoothing kernels per (lambda, mu, m, d)
/// cell, instance data seeded per cell.
inline std::vector<TableRow> run_ridge_table(const std::vector<RidgeCell>& grid,
                                             std::uint64_t seed,
                                             double tol = 1e-10,
                                             int max_iter = 2000) {
  std::vector<ExperimentSpec> specs;
  for (const auto& cell : grid) {
    if (cell.lambda_bar == cell.mu_bar)
      throw ConfigError("ridge grid: lambda == mu cell");
    std::ostringstream tag;
    tag << "ridge(" << cell.lambda_bar << ',' << cell.mu_bar << ")x(" << cell.m
        << ',' << cell.d << ')';
    std::ostringstream id;
    id << "ridge:seed=" << derive_seed(seed, tag.str()) << ":m=" << cell.m
       << ":d=" << cell.d << ":lam=" << cell.lambda_bar
       << ":mu=" << cell.mu_bar;
    ExperimentSpec spec;
    spec.problem_id = id.str();
    spec.methods = {MethodKind::Theta1, MethodKind::Theta2};
    spec.tol = tol;
    spec.max_iter = max_iter;
    spec.seed = seed;
    specs.push_back(std::move(spec));
  }
  return run_methods_table(specs);
}

inline std::vector<RidgeCell> default_table1_cells() {
  std::vector<RidgeCell> cells;
  for (double lm : {0.0, 200.0}) {
    const double mu = lm == 0.0 ? 100.0 : 1000.0;
    for (int m : {3, 5, 10, 20}) cells.push_back({lm, mu, m, 10});
  }
  return cells;
}

/// The method-comparison table defaults: the tridiagonal family in the
/// three published dimensions plus all printed b vectors of the R^3/R^4
/// examples, all four methods.
inline std::vector<ExperimentSpec> default_table2_specs(
    std::uint64_t seed = 42) {
  std::vector<ExperimentSpec> specs;
  const std::vector<MethodKind> all = {MethodKind::Theta1, MethodKind::Theta2,
                                       MethodKind::Softmax,
                                       MethodKind::InteriorPoint};
  for (int d : {10, 50, 200}) {
    ExperimentSpec s;
    std::ostringstream id;
    id << "tridiag:d=" << d << ":mode=randb:seed=" << seed;
    s.problem_id = id.str();
    s.methods = all;
    s.seed = seed;
    specs.push_back(std::move(s));
  }
  for (int k : {1, 2, 3}) {
    ExperimentSpec s;
    s.problem_id = "r3:b" + std::to_string(k);
    s.methods = all;
    s.seed = seed;
    specs.push_back(std::move(s));
  }
  for (int k : {1, 2, 3}) {
    ExperimentSpec s;
    s.problem_id = "r4:bstar" + std::to_string(k);
    s.methods = all;
    s.seed = seed;
    specs.push_back(std::move(s));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Convergence studies

struct ConvergenceStudy {
  double slope = 0.0;
  std::vector<std::pair<double, double>> points;  // (h, inf-norm error)
};

/// Solve the ODE problem over a decreasing mesh list and fit the
/// least-squares slope of log(error) against log(h).
inline ConvergenceStudy convergence_study(
    const std::function<OdeNave(double)>& ode_builder,
    const std::vector<double>& h_list, MethodKind method, double tol = 1e-10,
    int max_iter = 2000) {
  if (h_list.size() < 3)
    throw ConfigError("convergence_study: need at least 3 mesh sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (h_list[i] >= h_list[i - 1])
      throw ConfigError("convergence_study: h list must strictly decrease");

  ConvergenceStudy study;
  for (double h : h_list) {
    const OdeNave ode = ode_builder(h);
    const SolveReport report =
        run_method(ode.problem, method, tol, max_iter, 1.0);
    if (report.status != SolveStatus::Converged) {
      std::ostringstream msg;
      msg << "convergence study: solve failed at h=" << h << " ("
          << to_string(report.status) << ")";
      throw EvaluationFailure(msg.str());
    }
    study.points.emplace_back(h, ode_error_inf(ode, report.x_final));
  }
  // Least-squares fit of log e = slope * log h + c.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(study.points.size());
  for (const auto& [h, e] : study.points) {
    const double lx = std::log(h), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  study.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return study;
}

// ---------------------------------------------------------------------------
// Emission / ingestion

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

/// CSV columns: label,method,error,iterations,time_ms,status
inline void emit_csv(const std::vector<TableRow>& rows, std::ostream& os) {
  os << "label,method,error,iterations,time_ms,status\n";
  for (const auto& row : rows)
    for (const auto& [method, cell] : row.results)
      os << row.label << ',' << to_string(method) << ','
         << detail::format_double(cell.error) << ',' << cell.iterations << ','
         << detail::format_double(cell.time_ms) << ','
         << to_string(cell.status) << '\n';
}

/// Markdown mirroring the reference tables: grouped Error / Iterations /
/// Running time (x e-2 s) columns per method.
inline void emit_markdown(const std::vector<TableRow>& rows,
                          std::ostream& os) {
  std::vector<MethodKind> methods;
  for (MethodKind m : {MethodKind::Theta1, MethodKind::Theta2,
                       MethodKind::Softmax, MethodKind::InteriorPoint}) {
    bool present = false;
    for (const auto& row : rows)
      if (row.results.count(m)) present = true;
    if (present) methods.push_back(m);
  }
  os << "| Problem |";
  for (auto m : methods) os << " Error " << to_string(m) << " |";
  for (auto m : methods) os << " Iter " << to_string(m) << " |";
  for (auto m : methods) os << " Time(x e-2 s) " << to_string(m) << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < methods.size() * 3; ++i) os << "---|";
  os << '\n';
  for (const auto& row : rows) {
    os << "| " << row.label << " |";
    auto cell_of = [&](MethodKind m) -> const MethodResult* {
      auto it = row.results.find(m);
      return it == row.results.end() ? nullptr : &it->second;
    };
    for (auto m : methods) {
      const MethodResult* c = cell_of(m);
      os << ' '
         << (c ? (std::isnan(c->error)
                      ? std::string("NaN")
                      : [&] {
                          std::ostringstream v;
                          v << std::setprecision(3) << c->error;
                          return v.str();
                        }())
               : std::string("-"))
         << " |";
    }
    for (auto m : methods) {
      const MethodResult* c = cell_of(m);
      if (c)
        os << ' ' << c->iterations << " |";
      else
        os << " - |";
    }
    for (auto m : methods) {
      const MethodResult* c = cell_of(m);
      if (c) {
        std::ostringstream v;
        v << std::setprecision(3) << c->time_ms / 10.0;  // ms -> 1e-2 s
        os << ' ' << v.str() << " |";
      } else {
        os << " - |";
      }
    }
    os << '\n';
  }
}

/// Inverse of emit_csv (reports are not reconstructed).
inline std::vector<TableRow> ingest_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) ||
      line != "label,method,error,iterations,time_ms,status")
    throw InvalidInput("ingest_csv: missing header");
  std::vector<TableRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string label, method, error, iters, time_ms, status;
    if (!std::getline(ls, label, ',') || !std::getline(ls, method, ',') ||
        !std::getline(ls, error, ',') || !std::getline(ls, iters, ',') ||
        !std::getline(ls, time_ms, ',') || !std::getline(ls, status))
      throw InvalidInput("ingest_csv: malformed line: " + line);
    if (rows.empty() || rows.back().label != label) {
      rows.push_back(TableRow{});
      rows.back().label = label;
    }
    MethodResult cell;
    cell.error = error == "NaN" ? std::numeric_limits<double>::quiet_NaN()
                                : std::stod(error);
    cell.iterations = std::stoi(iters);
    cell.time_ms = std::stod(time_ms);
    bool known = false;
    for (SolveStatus s :
         {SolveStatus::Converged, SolveStatus::MaxIterations,
          SolveStatus::LineSearchStalled, SolveStatus::SingularJacobian,
          SolveStatus::DomainBreakdown})
      if (status == to_string(s)) {
        cell.status = s;
        known = true;
      }
    if (!known) throw InvalidInput("ingest_csv: unknown status " + status);
    rows.back().results[method_from_string(method)] = std::move(cell);
  }
  return rows;
}

/// Two-column plot data `h,error`.
inline void emit_study(const ConvergenceStudy& study, std::ostream& os) {
  os << "h,error\n";
  for (const auto& [h, e] : study.points)
    os << detail::format_double(h) << ',' << detail::format_double(e) << '\n';
  os << "# slope," << detail::format_double(study.slope) << '\n';
}

// ---------------------------------------------------------------------------
// Spec files: blank-line separated key=value blocks.

inline std::vector<ExperimentSpec> parse_spec_file(std::istream& is) {
  std::vector<ExperimentSpec> specs;
  std::optional<ExperimentSpec> current;
  std::string line;
  auto flush = [&] {
    if (current) {
      if (current->problem_id.empty())
        throw ConfigError("spec block missing `problem=`");
      specs.push_back(*current);
      current.reset();
    }
  };
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) {
      flush();
      continue;
    }
    if (line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("spec file line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    if (!value.empty() && value.back() == '\r') value.pop_back();
    if (!current) current.emplace();
    if (key == "problem") {
      current->problem_id = value;
    } else if (key == "methods") {
      current->methods.clear();
      std::istringstream ms(value);
      std::string tok;
      while (std::getline(ms, tok, ','))
        current->methods.push_back(method_from_string(tok));
    } else if (key == "tol") {
      current->tol = std::stod(value);
    } else if (key == "max_iter") {
      current->max_iter = std::stoi(value);
    } else if (key == "eps") {
      current->eps = std::stod(value);
    } else if (key == "seed") {
      current->seed = std::stoull(value);
    } else if (key == "repetitions") {
      current->repetitions = std::stoi(value);
    } else {
      throw ConfigError("spec file line " + std::to_string(lineno) +
                        ": unknown key `" + key + "`");
    }
  }
  flush();
  for (auto& spec : specs)
    if (spec.methods.empty())
      spec.methods = {MethodKind::Theta1, MethodKind::Theta2,
                      MethodKind::Softmax, MethodKind::InteriorPoint};
  return specs;
}

}  // namespace nave
