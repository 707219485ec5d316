#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

/// Core numeric types for absolute-value equation problems: variable
/// splitting x = y - z, residual evaluation and a finite-difference
/// Jacobian fallback. Everything here is a pure value type; evaluation
/// handles are expected to be reentrant.
namespace nave {

using RealVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Error taxonomy. Thrown by operations across all modules; the solver
// catches DomainError and folds it into its report status.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EvaluationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateDerivative : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeLimit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ProbeDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConversionImpossible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline bool all_finite(const RealVector& v) { return v.allFinite(); }
inline bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

/// A nonlinear absolute value equation F(x) - |x| = b in R^d.
/// `rhs` is stored explicitly (zero when the problem is stated as
/// F(x) - |x| = 0) so reported errors match ||F(x) - |x| - b||.
struct NaveProblem {
  int dim = 0;
  std::function<RealVector(const RealVector&)> f_eval;
  std::function<DenseMatrix(const RealVector&)> jac_eval;  // optional
  RealVector rhs;
  std::string label;

  bool has_analytic_jacobian() const { return static_cast<bool>(jac_eval); }

  /// Evaluate F with dimension/finiteness checks.
  RealVector f(const RealVector& x) const {
    RealVector out = f_eval(x);
    if (out.size() != dim)
      throw EvaluationFailure(label + ": F returned wrong dimension");
    if (!all_finite(out))
      throw EvaluationFailure(label + ": F returned non-finite values");
    return out;
  }
};

/// The nonnegative parts (y, z) = (x+, x-) of a vector.
struct SplitPair {
  RealVector y;
  RealVector z;
};

/// Componentwise split x = y - z with y = max(x,0), z = max(-x,0).
inline SplitPair split(const RealVector& x) {
  if (!all_finite(x)) throw InvalidInput("split: non-finite input");
  return {x.cwiseMax(0.0), (-x).cwiseMax(0.0)};
}

/// Inverse of split: x = y - z.
inline RealVector merge(const SplitPair& p) {
  if (p.y.size() != p.z.size())
    throw InvalidInput("merge: dimension mismatch");
  return p.y - p.z;
}

/// Residual F(x) - |x| - b; the solution test is ||residual||_2 <= tol.
inline RealVector nave_residual(const NaveProblem& p, const RealVector& x) {
  if (x.size() != p.dim)
    throw InvalidInput("nave_residual: dimension mismatch");
  return p.f(x) - x.cwiseAbs() - p.rhs;
}

/// Central-difference approximation of the Jacobian of F,
/// column j = (F(x + h e_j) - F(x - h e_j)) / (2h).
inline DenseMatrix fd_jacobian(const NaveProblem& p, const RealVector& x,
                               double h = 1e-6) {
  if (h <= 0.0) throw InvalidInput("fd_jacobian: h must be positive");
  const int d = p.dim;
  DenseMatrix jac(d, d);
  RealVector xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    jac.col(j) = (p.f(xp) - p.f(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  if (!all_finite(jac))
    throw EvaluationFailure(p.label + ": non-finite finite-difference Jacobian");
  return jac;
}

/// Analytic Jacobian when the problem carries one, central differences
/// otherwise.
inline DenseMatrix problem_jacobian(const NaveProblem& p, const RealVector& x,
                                    double fd_step = 1e-6) {
  if (p.has_analytic_jacobian()) {
    DenseMatrix jac = p.jac_eval(x);
    if (jac.rows() != p.dim || jac.cols() != p.dim)
      throw EvaluationFailure(p.label + ": Jacobian has wrong shape");
    if (!all_finite(jac))
      throw EvaluationFailure(p.label + ": non-finite Jacobian");
    return jac;
  }
  return fd_jacobian(p, x, fd_step);
}

}  // namespace nave
