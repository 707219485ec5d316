#pragma once

#include "nave/core.hpp"
#include "nave/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

/// Comparison methods behind the same NaveProblem/SolveReport interface:
/// a soft-max (log-sum-exp) smoothing of the complementarity condition
/// driven by a geometric r schedule, and a primal-dual interior-point
/// path following method.
namespace nave {

struct BaselineConfig {
  double tol = 1e-10;
  int max_iter = 2000;  // total Newton steps across the whole run
  // Soft-max r schedule.
  double r_init = 1.0;
  double r_shrink = 0.2;
  double r_min = 1e-12;
  int max_backtracks = 40;
  // Interior point. The conservative default centering mirrors the slow
  // short-step profile of the reference experiments; lower sigma for a
  // fast path-following run.
  double sigma = 0.995;
  double frac_to_boundary = 0.9995;
  double fd_step = 1e-6;
};

/// Smoothed min(a, b) = -r log(e^{-a/r} + e^{-b/r}), evaluated in shifted
/// form so large magnitudes never overflow. Within r log 2 of min(a, b).
inline double softmax_min(double a, double b, double r) {
  if (r <= 0.0) throw InvalidInput("softmax_min: r must be positive");
  const double m = std::min(a, b);
  const double delta = std::abs(a - b);
  return m - r * std::log1p(std::exp(-delta / r));
}

namespace detail {

inline double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

struct BestIterate {
  double error = std::numeric_limits<double>::infinity();
  RealVector y, z;

  void update(double err, const RealVector& cy, const RealVector& cz) {
    if (err < error) {
      error = err;
      y = cy;
      z = cz;
    }
  }
};

inline void stamp(SolveReport& report, const BestIterate& best,
                  const std::chrono::steady_clock::time_point& t0) {
  report.state_final.y = best.y;
  report.state_final.z = best.z;
  report.x_final = best.y - best.z;
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
}

}  // namespace detail

/// Soft-max baseline: for each r in the geometric schedule, Newton-solve
/// the 2d system
///     z - F(y-z) + y + b = 0,    softmax_min(y_i, z_i, r) = 0
/// warm-starting from the previous r. Converged means the NAVE residual
/// itself dropped below tol. Iterations count total Newton steps.
inline SolveReport solve_softmax(const NaveProblem& p,
                                 const BaselineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int d = p.dim;
  SolveReport report;
  detail::BestIterate best;

  RealVector y = RealVector::Ones(d);
  RealVector z = RealVector::Ones(d);
  best.y = y;
  best.z = z;
  int steps = 0;

  auto fail = [&](SolveStatus status, const std::string& msg) {
    report.status = status;
    report.iterations = steps;
    report.message = msg;
    detail::stamp(report, best, t0);
    return report;
  };

  for (double r = cfg.r_init; r >= cfg.r_min; r *= cfg.r_shrink) {
    for (int inner = 0; inner < 80; ++inner) {
      RealVector nave_res;
      try {
        nave_res = nave_residual(p, y - z);
      } catch (const EvaluationFailure& e) {
        return fail(SolveStatus::DomainBreakdown,
                    std::string(e.what()) + " at Newton step " +
                        std::to_string(steps));
      }
      const double err = nave_res.norm();
      report.residual_history.push_back(err);
      report.r_history.push_back(r);
      best.update(err, y, z);
      if (err <= cfg.tol) {
        report.status = SolveStatus::Converged;
        report.iterations = steps;
        detail::stamp(report, best, t0);
        return report;
      }

      RealVector phi(2 * d);
      phi.segment(0, d) = z - p.f(y - z) + y + p.rhs;
      for (int i = 0; i < d; ++i) phi[d + i] = softmax_min(y[i], z[i], r);
      if (!phi.allFinite())
        return fail(SolveStatus::DomainBreakdown,
                    "non-finite system at Newton step " + std::to_string(steps));
      const double phi_norm = phi.norm();
      if (phi_norm <= std::max(0.1 * r, 0.25 * cfg.tol)) break;  // next r

      DenseMatrix jac = DenseMatrix::Zero(2 * d, 2 * d);
      const DenseMatrix df = problem_jacobian(p, y - z, cfg.fd_step);
      const DenseMatrix eye = DenseMatrix::Identity(d, d);
      jac.block(0, 0, d, d) = eye - df;
      jac.block(0, d, d, d) = eye + df;
      for (int i = 0; i < d; ++i) {
        const double gy = detail::logistic((z[i] - y[i]) / r);
        jac(d + i, i) = gy;
        jac(d + i, d + i) = 1.0 - gy;
      }
      RealVector dir = jac.partialPivLu().solve(-phi);
      if (!dir.allFinite())
        return fail(SolveStatus::DomainBreakdown,
                    "singular smoothed system at Newton step " +
                        std::to_string(steps));

      // Armijo on 1/2 ||phi||^2; Newton slope is -||phi||^2.
      const double slope = -phi_norm * phi_norm;
      double step = 1.0;
      bool accepted = false;
      for (int j = 0; j <= cfg.max_backtracks; ++j, step *= 0.5) {
        const RealVector yt = y + step * dir.segment(0, d);
        const RealVector zt = z + step * dir.segment(d, d);
        RealVector phit(2 * d);
        try {
          phit.segment(0, d) = zt - p.f(yt - zt) + yt + p.rhs;
        } catch (const EvaluationFailure&) {
          continue;
        }
        for (int i = 0; i < d; ++i)
          phit[d + i] = softmax_min(yt[i], zt[i], r);
        if (!phit.allFinite()) continue;
        if (0.5 * phit.squaredNorm() - 0.5 * phi_norm * phi_norm <=
            1e-4 * step * slope) {
          y = yt;
          z = zt;
          accepted = true;
          break;
        }
      }
      ++steps;
      if (!accepted) break;  // stalled at this r; continuation may recover
      if (steps >= cfg.max_iter)
        return fail(SolveStatus::MaxIterations, "Newton step budget spent");
    }
  }
  return fail(SolveStatus::MaxIterations, "r schedule exhausted");
}

/// Generic primal-dual path following core for the complementarity system
///     G(y, z) = 0,   y >= 0, z >= 0, y . z = 0
/// with Newton steps on [G; y.z - mu e], mu = sigma <y,z>/d, and a
/// fraction-to-boundary cap keeping (y, z) strictly positive. `error_fn`
/// defines both the stopping test and the reported residual.
struct IpCallbacks {
  // residual G and its two Jacobian blocks [dG/dy | dG/dz]
  std::function<RealVector(const RealVector&, const RealVector&)> residual;
  std::function<std::pair<DenseMatrix, DenseMatrix>(const RealVector&,
                                                    const RealVector&)>
      jacobian;
  std::function<double(const RealVector&, const RealVector&)> error_fn;
};

inline SolveReport interior_point_core(const IpCallbacks& cb, RealVector y,
                                       RealVector z,
                                       const BaselineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int d = static_cast<int>(y.size());
  SolveReport report;
  detail::BestIterate best;

  if (y.minCoeff() <= 0.0 || z.minCoeff() <= 0.0)
    throw InvalidInput("interior_point_core: start must be interior");

  int k = 0;
  for (;; ++k) {
    const double err = cb.error_fn(y, z);
    report.residual_history.push_back(err);
    best.update(err, y, z);
    if (err <= cfg.tol) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (k >= cfg.max_iter) {
      report.status = SolveStatus::MaxIterations;
      report.message = "iteration budget spent; best residual reported";
      break;
    }

    const double mu = cfg.sigma * y.dot(z) / d;
    RealVector rhs(2 * d);
    rhs.segment(0, d) = -cb.residual(y, z);
    rhs.segment(d, d) = -(y.cwiseProduct(z) - RealVector::Constant(d, mu));

    const auto [gy, gz] = cb.jacobian(y, z);
    DenseMatrix jac = DenseMatrix::Zero(2 * d, 2 * d);
    jac.block(0, 0, d, d) = gy;
    jac.block(0, d, d, d) = gz;
    jac.block(d, 0, d, d) = z.asDiagonal();
    jac.block(d, d, d, d) = y.asDiagonal();

    const RealVector dir = jac.partialPivLu().solve(rhs);
    if (!dir.allFinite()) {
      report.status = SolveStatus::SingularJacobian;
      report.message = "singular KKT system at iteration " + std::to_string(k);
      break;
    }

    // Fraction-to-boundary: largest step keeping (y, z) > 0.
    double alpha = 1.0;
    for (int i = 0; i < d; ++i) {
      if (dir[i] < 0.0)
        alpha = std::min(alpha, -cfg.frac_to_boundary * y[i] / dir[i]);
      if (dir[d + i] < 0.0)
        alpha = std::min(alpha, -cfg.frac_to_boundary * z[i] / dir[d + i]);
    }
    y += alpha * dir.segment(0, d);
    z += alpha * dir.segment(d, d);
    report.step_history.push_back(alpha);
  }
  report.iterations = k;
  detail::stamp(report, best, t0);
  return report;
}

/// Interior-point baseline on the NAVE complementarity system
/// z - F(y-z) + y + b = 0 with pairing y . z -> 0. Reports the NAVE
/// residual ||F(x) - |x| - b|| as its error.
inline SolveReport solve_interior_point(const NaveProblem& p,
                                        const BaselineConfig& cfg) {
  IpCallbacks cb;
  cb.residual = [&p](const RealVector& y, const RealVector& z) {
    return RealVector(z - p.f(y - z) + y + p.rhs);
  };
  cb.jacobian = [&p, &cfg](const RealVector& y, const RealVector& z) {
    const DenseMatrix df = problem_jacobian(p, y - z, cfg.fd_step);
    const DenseMatrix eye = DenseMatrix::Identity(p.dim, p.dim);
    return std::make_pair(DenseMatrix(eye - df), DenseMatrix(eye + df));
  };
  cb.error_fn = [&p](const RealVector& y, const RealVector& z) {
    return nave_residual(p, y - z).norm();
  };
  return interior_point_core(cb, RealVector::Ones(p.dim),
                             RealVector::Ones(p.dim), cfg);
}

}  // namespace nave
