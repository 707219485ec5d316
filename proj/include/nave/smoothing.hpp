#pragma once

#include "nave/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

/// Smoothing kernels for complementarity: a kernel is a concave,
/// continuous, nondecreasing theta: R -> (-inf, 1) with theta(0) = 0 and
/// theta(t) < 0 for t < 0. Its complement psi = 1 - theta drives the
/// smoothed complementarity component
///     G_r(y, z) = r * psi_inv( psi(y/r) + psi(z/r) ),
/// a smooth surrogate for min(y, z) = 0. This header also provides the
/// numerical checkers for the Lojasiewicz-at-infinity property of psi and
/// its equivalent halving condition psi(x)/m >= psi(n x) on (R, inf).
namespace nave {

struct GrPartials {
  double d_yi;
  double d_zi;
  double d_r;
};

/// One smoothing kernel: theta with its psi = 1 - theta machinery.
/// Families may install specialized gr handles when the generic
/// psi-composition is numerically fragile (theta2's exponentials).
struct SmoothingFamily {
  std::function<double(double)> theta;
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_inv;
  std::string label;

  // Optional numerically-stable overrides; same values as the generic path.
  std::function<double(double, double, double)> gr_override;
  std::function<GrPartials(double, double, double)> gr_partials_override;
};

/// theta1(t) = t/(t+1) on t >= 0, t on t < 0. Rational kernel; all of its
/// psi machinery is overflow-free.
inline SmoothingFamily make_theta1() {
  SmoothingFamily fam;
  fam.label = "theta1";
  fam.theta = [](double t) { return t >= 0.0 ? t / (t + 1.0) : t; };
  fam.psi = [](double t) { return t >= 0.0 ? 1.0 / (1.0 + t) : 1.0 - t; };
  fam.psi_prime = [](double t) {
    return t >= 0.0 ? -1.0 / ((1.0 + t) * (1.0 + t)) : -1.0;
  };
  fam.psi_inv = [](double s) {
    if (s <= 0.0) throw DomainError("theta1: psi_inv needs s > 0");
    return s <= 1.0 ? 1.0 / s - 1.0 : 1.0 - s;
  };
  return fam;
}

/// theta2(t) = 1 - exp(-t). Its G_r is exactly the log-sum-exp smoothed
/// min, so the overrides use the shifted form to dodge overflow/underflow.
inline SmoothingFamily make_theta2() {
  SmoothingFamily fam;
  fam.label = "theta2";
  fam.theta = [](double t) { return 1.0 - std::exp(-t); };
  fam.psi = [](double t) { return std::exp(-t); };
  fam.psi_prime = [](double t) { return -std::exp(-t); };
  fam.psi_inv = [](double s) {
    if (s <= 0.0) throw DomainError("theta2: psi_inv needs s > 0");
    return -std::log(s);
  };
  fam.gr_override = [](double yi, double zi, double r) {
    const double m = std::min(yi, zi);
    const double delta = std::abs(yi - zi);
    return m - r * std::log1p(std::exp(-delta / r));
  };
  fam.gr_partials_override = [](double yi, double zi, double r) {
    // dG/dyi = e^{-yi/r} / (e^{-yi/r} + e^{-zi/r}), a logistic in (zi-yi)/r.
    const double gy = 1.0 / (1.0 + std::exp((yi - zi) / r));
    const double gz = 1.0 - gy;
    const double m = std::min(yi, zi);
    const double g = m - r * std::log1p(std::exp(-std::abs(yi - zi) / r));
    // G_r is positively homogeneous of degree one in (y, z, r).
    const double gr = (g - yi * gy - zi * gz) / r;
    return GrPartials{gy, gz, gr};
  };
  return fam;
}

/// psi(x) = 1/log(1+x), the convex decreasing function that fails the
/// Lojasiewicz inequality at infinity. Checker battery only: theta = 1-psi
/// blows up at 0+, so the handles are restricted to x > 0 and the family
/// is never used as a solver kernel.
inline SmoothingFamily make_log_counterexample() {
  SmoothingFamily fam;
  fam.label = "logexp-counterexample";
  auto guard = [](double t) {
    if (t <= 0.0)
      throw DomainError("logexp-counterexample: defined on (0, inf) only");
  };
  fam.psi = [guard](double t) {
    guard(t);
    return 1.0 / std::log1p(t);
  };
  fam.psi_prime = [guard](double t) {
    guard(t);
    const double l = std::log1p(t);
    return -1.0 / ((1.0 + t) * l * l);
  };
  fam.theta = [fam_psi = fam.psi](double t) { return 1.0 - fam_psi(t); };
  fam.psi_inv = [](double s) {
    if (s <= 0.0)
      throw DomainError("logexp-counterexample: psi_inv needs s > 0");
    return std::expm1(1.0 / s);
  };
  return fam;
}

namespace detail {
// Guard against underflow of psi(t/r) (theta2 at t/r beyond ~745): a hard
// zero would feed log(0) into psi_inv.
inline double clamp_positive(double s) {
  return std::max(s, std::numeric_limits<double>::min());
}
}  // namespace detail

/// Smoothed complementarity component r * psi_inv(psi(yi/r) + psi(zi/r)).
/// Symmetric in (yi, zi). Throws DomainError when the kernel cannot
/// represent these magnitudes at this r (caller must safeguard).
inline double gr_component(const SmoothingFamily& fam, double yi, double zi,
                           double r) {
  if (r <= 0.0) throw InvalidInput("gr_component: r must be positive");
  if (fam.gr_override) return fam.gr_override(yi, zi, r);
  const double s =
      detail::clamp_positive(fam.psi(yi / r) + fam.psi(zi / r));
  const double value = r * fam.psi_inv(s);
  if (!std::isfinite(value))
    throw DomainError(fam.label + ": G_r not representable at r=" +
                      std::to_string(r));
  return value;
}

/// Partial derivatives of gr_component with respect to (yi, zi, r):
///   dG/dyi = psi'(yi/r) / psi'(psi_inv(S)),   S = psi(yi/r) + psi(zi/r)
///   dG/dr  = psi_inv(S) - [yi psi'(yi/r) + zi psi'(zi/r)] / (r psi'(psi_inv(S)))
inline GrPartials gr_partials(const SmoothingFamily& fam, double yi, double zi,
                              double r) {
  if (r <= 0.0) throw InvalidInput("gr_partials: r must be positive");
  if (fam.gr_partials_override) return fam.gr_partials_override(yi, zi, r);
  const double s =
      detail::clamp_positive(fam.psi(yi / r) + fam.psi(zi / r));
  const double u = fam.psi_inv(s);
  const double denom = fam.psi_prime(u);
  if (denom == 0.0 || !std::isfinite(denom))
    throw DegenerateDerivative(fam.label + ": psi' vanishes at psi_inv(S)");
  const double py = fam.psi_prime(yi / r);
  const double pz = fam.psi_prime(zi / r);
  GrPartials out;
  out.d_yi = py / denom;
  out.d_zi = pz / denom;
  out.d_r = u - (yi * py + zi * pz) / (r * denom);
  if (!std::isfinite(out.d_yi) || !std::isfinite(out.d_zi) ||
      !std::isfinite(out.d_r))
    throw DegenerateDerivative(fam.label + ": non-finite G_r partials");
  return out;
}

/// The Lojasiewicz ratio x |psi'(x)| / psi(x) at x > 0.
inline double loja_ratio(const SmoothingFamily& fam, double x) {
  if (x <= 0.0) throw InvalidInput("loja_ratio: x must be positive");
  const double p = fam.psi(x);
  if (p <= 0.0) throw DomainError("loja_ratio: psi(x) must be positive");
  return x * std::abs(fam.psi_prime(x)) / p;
}

/// Halving condition: psi(x)/m >= psi(n x) at every grid point in (R, inf).
/// A finite-grid surrogate for the universally quantified statement.
inline bool check_condition_ii(const SmoothingFamily& fam, double m, double n,
                               double big_r, const std::vector<double>& grid) {
  if (m <= 1.0 || n <= 1.0)
    throw InvalidInput("check_condition_ii: m, n must exceed 1");
  if (grid.empty()) throw InvalidInput("check_condition_ii: empty grid");
  for (double x : grid) {
    if (x <= big_r)
      throw InvalidInput("check_condition_ii: grid point not in (R, inf)");
    if (fam.psi(x) / m < fam.psi(n * x)) return false;
  }
  return true;
}

/// Legacy form psi(t)/2 >= psi(t/a) on (Ra, inf); the m = 2, n = 1/a case.
inline bool check_legacy_assumption(const SmoothingFamily& fam, double a,
                                    double ra, const std::vector<double>& grid) {
  if (a <= 0.0 || a >= 1.0)
    throw InvalidInput("check_legacy_assumption: a must lie in (0,1)");
  return check_condition_ii(fam, 2.0, 1.0 / a, ra, grid);
}

struct MnrCandidate {
  double m;
  double n;
  double big_r;
};

enum class LojaVerdict { SatisfiedI, SatisfiedII, FailsBoth, Inconclusive };

/// Numerical verdict on the Lojasiewicz/halving equivalence for one kernel.
struct LojaReport {
  std::string family_label;
  std::vector<std::pair<double, double>> ratio_samples;  // (x, ratio)
  double liminf_estimate = 0.0;
  std::optional<MnrCandidate> condition_ii_witness;
  LojaVerdict verdict = LojaVerdict::Inconclusive;
};

inline const char* to_string(LojaVerdict v) {
  switch (v) {
    case LojaVerdict::SatisfiedI: return "SatisfiedI";
    case LojaVerdict::SatisfiedII: return "SatisfiedII";
    case LojaVerdict::FailsBoth: return "FailsBoth";
    case LojaVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || hi <= lo || points < 2)
    throw InvalidInput("geometric_grid: need 0 < lo < hi, points >= 2");
  std::vector<double> g(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

/// Condition-(iii)-style candidate ladder: for each m in {2, 10, 100},
/// n is searched geometrically upward from m, all with R = 1.
inline std::vector<MnrCandidate> default_mn_candidates() {
  std::vector<MnrCandidate> cands;
  for (double m : {2.0, 10.0, 100.0})
    for (int j = 0; j <= 10; ++j)
      cands.push_back({m, m * static_cast<double>(1 << j), 1.0});
  return cands;
}

/// Estimate condition (i) from the ratio tail, search the candidate list
/// for a condition (ii) witness, and cross-check the theorem's (i) <=> (ii)
/// equivalence. The liminf estimate is the minimum ratio over the last half
/// of the grid; since a finite window cannot see the limit, a tail that is
/// strictly decreasing and has lost >= 10% across the window is read as
/// decaying to zero (this is what the log-counterexample looks like at any
/// representable x, where the ratio ~ 1/log x is still above any fixed cut).
inline LojaReport loja_verdict(
    const SmoothingFamily& fam, const std::vector<double>& tail_grid,
    const std::vector<MnrCandidate>& candidates = default_mn_candidates()) {
  if (tail_grid.size() < 50)
    throw InvalidInput("loja_verdict: need at least 50 grid points");
  for (std::size_t i = 1; i < tail_grid.size(); ++i)
    if (tail_grid[i] <= tail_grid[i - 1])
      throw InvalidInput("loja_verdict: grid must be strictly increasing");

  LojaReport report;
  report.family_label = fam.label;
  report.ratio_samples.reserve(tail_grid.size());
  for (double x : tail_grid)
    report.ratio_samples.emplace_back(x, loja_ratio(fam, x));

  const std::size_t begin = tail_grid.size() / 2;
  double min_ratio = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (std::size_t i = begin; i < report.ratio_samples.size(); ++i) {
    min_ratio = std::min(min_ratio, report.ratio_samples[i].second);
    if (i > begin &&
        report.ratio_samples[i].second >= report.ratio_samples[i - 1].second)
      decreasing = false;
  }
  report.liminf_estimate = min_ratio;
  const double first = report.ratio_samples[begin].second;
  const double last = report.ratio_samples.back().second;
  const bool decaying = decreasing && last < 0.9 * first;
  const bool satisfied_i = min_ratio > 1e-3 && !decaying;

  for (const auto& cand : candidates) {
    std::vector<double> sub;
    for (double x : tail_grid)
      if (x > cand.big_r) sub.push_back(x);
    if (sub.empty()) continue;
    if (check_condition_ii(fam, cand.m, cand.n, cand.big_r, sub)) {
      report.condition_ii_witness = cand;
      break;
    }
  }
  const bool satisfied_ii = report.condition_ii_witness.has_value();

  // The theorem says (i) <=> (ii); a numerical mismatch is inconclusive.
  if (satisfied_i && satisfied_ii)
    report.verdict = LojaVerdict::SatisfiedI;
  else if (!satisfied_i && !satisfied_ii)
    report.verdict = LojaVerdict::FailsBoth;
  else
    report.verdict = LojaVerdict::Inconclusive;
  return report;
}

}  // namespace nave
