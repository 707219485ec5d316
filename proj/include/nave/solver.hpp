#pragma once

#include "nave/core.hpp"
#include "nave/smoothing.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

/// Smoothing Newton solver. The NAVE F(x) - |x| = b is rewritten through
/// x = y - z, |x| = y + z into the augmented system in X = (y, z, r):
///
///     z - F(y - z) + y + b                          = 0   (d rows)
///     r psi_inv( psi(y_i/r) + psi(z_i/r) )          = 0   (d rows)
///     1/2 ||y^-||^2 + 1/2 ||z^-||^2 + r^2 + eps r   = 0   (1 row)
///
/// and solved by Newton directions with an Armijo backtracking search on
/// the merit Theta(X) = 1/2 ||H(X)||^2. The last equation drives r to 0,
/// which restores exact complementarity in the limit.
namespace nave {

struct AugmentedState {
  RealVector y;
  RealVector z;
  double r = 0.0;

  RealVector x() const { return y - z; }
};

enum class SolveStatus {
  Converged,
  MaxIterations,
  LineSearchStalled,
  SingularJacobian,
  DomainBreakdown
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::LineSearchStalled: return "line_search_stalled";
    case SolveStatus::SingularJacobian: return "singular_jacobian";
    case SolveStatus::DomainBreakdown: return "domain_breakdown";
  }
  return "?";
}

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 2000;
  double tau = 1e-4;       // Armijo slope fraction, in (0, 1/2)
  double rho = 0.5;        // backtracking factor, in (0, 1)
  double epsilon = 1.0;    // coefficient of the r-driving equation
  int max_backtracks = 60;
  double fd_step = 1e-6;   // Jacobian fallback step
  SmoothingFamily family = make_theta1();
  // Initial point: ones unless an explicit interior (y0, z0) is given.
  std::optional<std::pair<RealVector, RealVector>> init;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  RealVector x_final;
  AugmentedState state_final;
  std::vector<double> residual_history;  // ||H(X^k)||
  std::vector<double> merit_history;
  std::vector<double> step_history;      // accepted zeta^k
  std::vector<double> r_history;
  int iterations = 0;
  double wall_time_ms = 0.0;
  int backtrack_total = 0;
  std::string message;
};

/// The augmented residual H(X) of the three blocks above.
inline RealVector assemble_residual(const NaveProblem& p,
                                    const SolverConfig& cfg,
                                    const AugmentedState& state) {
  if (state.r <= 0.0)
    throw InvalidInput("assemble_residual: r must be positive");
  const int d = p.dim;
  RealVector h(2 * d + 1);
  h.segment(0, d) = state.z - p.f(state.x()) + state.y + p.rhs;
  for (int i = 0; i < d; ++i)
    h[d + i] = gr_component(cfg.family, state.y[i], state.z[i], state.r);
  const RealVector ym = (-state.y).cwiseMax(0.0);
  const RealVector zm = (-state.z).cwiseMax(0.0);
  h[2 * d] = 0.5 * ym.squaredNorm() + 0.5 * zm.squaredNorm() +
             state.r * state.r + cfg.epsilon * state.r;
  return h;
}

/// The (2d+1)x(2d+1) Jacobian of H. Block rows: [I - DF | I + DF | 0],
/// then the diagonal G_r partials with their r column, and last the
/// gradient [-(y^-)^T, -(z^-)^T, 2r + eps].
inline DenseMatrix assemble_jacobian(const NaveProblem& p,
                                     const SolverConfig& cfg,
                                     const AugmentedState& state) {
  if (state.r <= 0.0)
    throw InvalidInput("assemble_jacobian: r must be positive");
  const int d = p.dim;
  const DenseMatrix df = problem_jacobian(p, state.x(), cfg.fd_step);
  const DenseMatrix eye = DenseMatrix::Identity(d, d);

  DenseMatrix jac = DenseMatrix::Zero(2 * d + 1, 2 * d + 1);
  jac.block(0, 0, d, d) = eye - df;
  jac.block(0, d, d, d) = eye + df;
  for (int i = 0; i < d; ++i) {
    const GrPartials g =
        gr_partials(cfg.family, state.y[i], state.z[i], state.r);
    jac(d + i, i) = g.d_yi;
    jac(d + i, d + i) = g.d_zi;
    jac(d + i, 2 * d) = g.d_r;
  }
  for (int i = 0; i < d; ++i) {
    jac(2 * d, i) = -std::max(-state.y[i], 0.0);
    jac(2 * d, d + i) = -std::max(-state.z[i], 0.0);
  }
  jac(2 * d, 2 * d) = 2.0 * state.r + cfg.epsilon;
  return jac;
}

/// Merit Theta(X) = 1/2 ||H(X)||^2 minimized along Newton directions.
inline double merit(const NaveProblem& p, const SolverConfig& cfg,
                    const AugmentedState& state) {
  return 0.5 * assemble_residual(p, cfg, state).squaredNorm();
}

/// grad Theta = (grad H)^T H.
inline RealVector merit_gradient(const NaveProblem& p, const SolverConfig& cfg,
                                 const AugmentedState& state) {
  return assemble_jacobian(p, cfg, state).transpose() *
         assemble_residual(p, cfg, state);
}

namespace detail {

inline AugmentedState advance(const AugmentedState& state,
                              const RealVector& dir, double step) {
  const int d = static_cast<int>(state.y.size());
  AugmentedState next;
  next.y = state.y + step * dir.segment(0, d);
  next.z = state.z + step * dir.segment(d, d);
  next.r = state.r + step * dir[2 * d];
  return next;
}

// Newton step: solve J dir = -h, falling back once to J + mu I when the
// factorization looks bad or the direction is not a descent direction.
struct NewtonDirection {
  RealVector dir;
  double slope = 0.0;  // grad Theta . dir
  bool ok = false;
};

inline NewtonDirection newton_direction(const DenseMatrix& jac,
                                        const RealVector& h) {
  NewtonDirection nd;
  const double hnorm = h.norm();
  const RealVector grad = jac.transpose() * h;
  auto attempt = [&](const DenseMatrix& m) -> bool {
    RealVector dir = m.partialPivLu().solve(-h);
    if (!dir.allFinite()) return false;
    if ((m * dir + h).norm() > 1e-8 * std::max(1.0, hnorm)) return false;
    const double slope = grad.dot(dir);
    if (!(slope < 0.0)) return false;
    nd.dir = std::move(dir);
    nd.slope = slope;
    nd.ok = true;
    return true;
  };
  if (attempt(jac)) return nd;
  const double mu = 1e-8 * hnorm;
  DenseMatrix reg = jac;
  reg.diagonal().array() += mu;
  attempt(reg);
  return nd;
}

}  // namespace detail

/// The smoothing Newton method: from an interior (y0, z0) > 0 with
/// r0 = <y0, z0>/d, iterate Newton directions on H with Armijo
/// backtracking on Theta, keeping r positive along the way. Stops when
/// ||H(X)|| <= tol.
inline SolveReport newton_armijo_solve(const NaveProblem& p,
                                       const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int d = p.dim;
  SolveReport report;

  AugmentedState state;
  if (cfg.init) {
    state.y = cfg.init->first;
    state.z = cfg.init->second;
  } else {
    state.y = RealVector::Ones(d);
    state.z = RealVector::Ones(d);
  }
  if (state.y.size() != d || state.z.size() != d)
    throw InvalidInput("newton_armijo_solve: initial point has wrong size");
  if (state.y.minCoeff() <= 0.0 || state.z.minCoeff() <= 0.0)
    throw InvalidInput("newton_armijo_solve: initial point must be interior");
  state.r = state.y.dot(state.z) / d;

  auto finish = [&](SolveStatus status, int iters, std::string msg) {
    report.status = status;
    report.iterations = iters;
    report.state_final = state;
    report.x_final = state.x();
    report.message = std::move(msg);
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return report;
  };

  for (int k = 0;; ++k) {
    RealVector h;
    try {
      h = assemble_residual(p, cfg, state);
    } catch (const DomainError& e) {
      return finish(SolveStatus::DomainBreakdown, k, e.what());
    }
    const double hnorm = h.norm();
    report.residual_history.push_back(hnorm);
    report.merit_history.push_back(0.5 * hnorm * hnorm);
    report.r_history.push_back(state.r);
    if (hnorm <= cfg.tol) return finish(SolveStatus::Converged, k, "");
    if (k >= cfg.max_iter)
      return finish(SolveStatus::MaxIterations, k, "iteration budget spent");

    DenseMatrix jac;
    try {
      jac = assemble_jacobian(p, cfg, state);
    } catch (const DegenerateDerivative& e) {
      return finish(SolveStatus::SingularJacobian, k, e.what());
    } catch (const DomainError& e) {
      return finish(SolveStatus::DomainBreakdown, k, e.what());
    }
    const detail::NewtonDirection nd = detail::newton_direction(jac, h);
    if (!nd.ok)
      return finish(SolveStatus::SingularJacobian, k,
                    "no descent direction from (regularized) Newton system");

    const double theta0 = 0.5 * hnorm * hnorm;
    double zeta = 1.0;
    bool accepted = false;
    for (int j = 0; j <= cfg.max_backtracks; ++j, zeta *= cfg.rho) {
      const AugmentedState trial = detail::advance(state, nd.dir, zeta);
      if (trial.r <= 0.0) {  // positivity safeguard on the smoothing radius
        ++report.backtrack_total;
        continue;
      }
      double theta_trial;
      try {
        theta_trial = 0.5 * assemble_residual(p, cfg, trial).squaredNorm();
      } catch (const DomainError&) {
        ++report.backtrack_total;
        continue;
      }
      if (theta_trial - theta0 <= cfg.tau * zeta * nd.slope) {
        state = trial;
        report.step_history.push_back(zeta);
        accepted = true;
        break;
      }
      ++report.backtrack_total;
    }
    if (!accepted)
      return finish(SolveStatus::LineSearchStalled, k,
                    "Armijo exhausted max_backtracks");
  }
}

}  // namespace nave
