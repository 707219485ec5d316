#pragma once

#include "nave/core.hpp"
#include "nave/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

/// Benchmark catalog: every concrete problem instance used in the
/// experiments, with builders, exact-solution oracles where available,
/// and the AVE <-> LCP conversion.
namespace nave {

// ---------------------------------------------------------------------------
// AVE -> LCP conversion

/// M = (A+I)^-1 (A-I), q = (A+I)^-1 (-b) and the mirrored pair
/// Mt = (A-I)^-1 (A+I), qt = (A-I)^-1 b. Any AVE solution split as (y, z)
/// satisfies z = M y + q (respectively y = Mt z + qt).
struct LcpConversion {
  std::optional<std::pair<DenseMatrix, RealVector>> forward;   // (M, q)
  std::optional<std::pair<DenseMatrix, RealVector>> mirrored;  // (Mt, qt)
};

inline LcpConversion ave_to_lcp(const DenseMatrix& a, const RealVector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw InvalidInput("ave_to_lcp: shape mismatch");
  const int d = static_cast<int>(a.rows());
  const DenseMatrix eye = DenseMatrix::Identity(d, d);
  LcpConversion out;
  const auto invert_side = [&](const DenseMatrix& base)
      -> std::optional<Eigen::PartialPivLU<DenseMatrix>> {
    Eigen::PartialPivLU<DenseMatrix> lu(base);
    const double det = std::abs(lu.determinant());
    const double scale = std::max(1.0, base.cwiseAbs().maxCoeff());
    if (det <= 1e-12 * scale) return std::nullopt;
    return lu;
  };
  if (auto lu = invert_side(a + eye))
    out.forward = {lu->solve(DenseMatrix(a - eye)), lu->solve(RealVector(-b))};
  if (auto lu = invert_side(a - eye))
    out.mirrored = {lu->solve(DenseMatrix(a + eye)), lu->solve(b)};
  if (!out.forward && !out.mirrored)
    throw ConversionImpossible("ave_to_lcp: both A+I and A-I are singular");
  return out;
}

/// NaveProblem wrapper for a linear AVE: F(x) = A x.
inline NaveProblem make_linear_ave(const DenseMatrix& a, const RealVector& b,
                                   std::string label) {
  NaveProblem p;
  p.dim = static_cast<int>(a.rows());
  p.f_eval = [a](const RealVector& x) { return RealVector(a * x); };
  p.jac_eval = [a](const RealVector&) { return a; };
  p.rhs = b;
  p.label = std::move(label);
  return p;
}

// ---------------------------------------------------------------------------
// Tridiagonal family (Example with A = tridiag(-1, 4, -1))

enum class TridiagMode { FromXStar, RandomB };

struct TridiagInstance {
  NaveProblem problem;
  DenseMatrix matrix;
  RealVector x_star;  // empty in RandomB mode
};

inline DenseMatrix tridiag_matrix(int d) {
  if (d < 2) throw InvalidInput("tridiag_matrix: d >= 2 required");
  DenseMatrix a = DenseMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = 4.0;
    if (i > 0) a(i, i - 1) = -1.0;
    if (i + 1 < d) a(i, i + 1) = -1.0;
  }
  return a;
}

/// FromXStar seeds a known solution x* ~ U[-5,5]^d and sets b = Ax* - |x*|;
/// RandomB draws b ~ U[-5,5]^d directly. The matrix has all singular values
/// above 2, so either way the AVE has a unique solution.
inline TridiagInstance make_tridiag(int d, TridiagMode mode,
                                    std::uint64_t seed) {
  TridiagInstance inst;
  inst.matrix = tridiag_matrix(d);
  std::mt19937_64 gen(seed);
  std::ostringstream label;
  label << "tridiag:d=" << d
        << ":mode=" << (mode == TridiagMode::FromXStar ? "xstar" : "randb")
        << ":seed=" << seed;
  RealVector b;
  if (mode == TridiagMode::FromXStar) {
    inst.x_star = uniform_vector(d, -5.0, 5.0, gen);
    b = inst.matrix * inst.x_star - inst.x_star.cwiseAbs();
  } else {
    b = uniform_vector(d, -5.0, 5.0, gen);
  }
  inst.problem = make_linear_ave(inst.matrix, b, label.str());
  return inst;
}

// ---------------------------------------------------------------------------
// The two printed nonlinear examples in R^3 and R^4

inline RealVector r3_rhs(int which) {
  RealVector b(3);
  switch (which) {
    case 1: b << -1, -5, 10; break;
    case 2: b << 9, -100, 10; break;
    case 3: b << 200, 0, 900; break;
    default: throw InvalidInput("r3_rhs: which must be 1, 2 or 3");
  }
  return b;
}

inline RealVector r4_rhs(int which) {
  RealVector b(4);
  switch (which) {
    case 1: b << 10, 10, -12, 0; break;
    case 2: b << 20, -100, -12, 1; break;
    case 3: b << 200, 10, -5, -5; break;
    default: throw InvalidInput("r4_rhs: which must be 1, 2 or 3");
  }
  return b;
}

inline NaveProblem make_example_r3(RealVector b = RealVector::Zero(3),
                                   std::string label = "r3") {
  NaveProblem p;
  p.dim = 3;
  p.f_eval = [](const RealVector& x) {
    RealVector f(3);
    f[0] = 2.0 * x[0] - 2.0;
    f[1] = 2.0 * x[1] + x[1] * x[1] * x[1] - x[2] + 3.0;
    f[2] = x[1] + 2.0 * x[2] + 2.0 * x[2] * x[2] * x[2] - 3.0;
    return f;
  };
  p.jac_eval = [](const RealVector& x) {
    DenseMatrix j = DenseMatrix::Zero(3, 3);
    j(0, 0) = 2.0;
    j(1, 1) = 2.0 + 3.0 * x[1] * x[1];
    j(1, 2) = -1.0;
    j(2, 1) = 1.0;
    j(2, 2) = 2.0 + 6.0 * x[2] * x[2];
    return j;
  };
  p.rhs = std::move(b);
  p.label = std::move(label);
  return p;
}

inline NaveProblem make_example_r4(RealVector b = RealVector::Zero(4),
                                   std::string label = "r4") {
  NaveProblem p;
  p.dim = 4;
  p.f_eval = [](const RealVector& x) {
    RealVector f(4);
    f[0] = 3 * x[0] * x[0] + x[0] + 2 * x[0] * x[1] + 2 * x[1] * x[1] + x[2] +
           3 * x[3];
    f[1] = 2 * x[0] * x[0] + x[0] + x[1] * x[1] + x[1] + 10 * x[2] + 2 * x[3];
    f[2] = 3 * x[0] * x[0] + x[0] * x[1] + 2 * x[1] * x[1] + 3 * x[2] + 9 * x[3];
    f[3] = x[0] * x[0] + 3 * x[1] * x[1] + 2 * x[2] + 4 * x[3];
    return f;
  };
  p.jac_eval = [](const RealVector& x) {
    DenseMatrix j(4, 4);
    j << 6 * x[0] + 1 + 2 * x[1], 2 * x[0] + 4 * x[1], 1, 3,
        4 * x[0] + 1, 2 * x[1] + 1, 10, 2,
        6 * x[0] + x[1], x[0] + 4 * x[1], 3, 9,
        2 * x[0], 6 * x[1], 2, 4;
    return j;
  };
  p.rhs = std::move(b);
  p.label = std::move(label);
  return p;
}

// ---------------------------------------------------------------------------
// Asymmetric ridge regression

/// min_x 1/2 ||Ax - b||^2 + sum_j lambda_j max(x_j,0)^2 + mu_j max(-x_j,0)^2
/// with lambda_j != mu_j. Its stationarity condition is the NAVE
/// F(x) - |x| = 0 with
///   F(x)_j = (mu_j - lambda_j)^-1 (A^T(Ax-b))_j
///          + (mu_j + lambda_j)/(mu_j - lambda_j) x_j.
struct RidgeSpec {
  DenseMatrix design;  // A, m x d
  RealVector target;   // b in R^m
  RealVector lambda;   // per-coordinate, >= 0
  RealVector mu;       // per-coordinate, >= 0
};

inline NaveProblem make_ridge(const RidgeSpec& spec,
                              std::string label = "ridge") {
  const int d = static_cast<int>(spec.design.cols());
  const int m = static_cast<int>(spec.design.rows());
  if (spec.target.size() != m)
    throw InvalidSpec("make_ridge: target must have one entry per row of A");
  if (spec.lambda.size() != d || spec.mu.size() != d)
    throw InvalidSpec("make_ridge: lambda/mu must have one entry per column");
  for (int j = 0; j < d; ++j)
    if (spec.lambda[j] == spec.mu[j])
      throw InvalidSpec("make_ridge: lambda_j == mu_j is excluded");

  const RealVector inv_diff =
      (spec.mu - spec.lambda).cwiseInverse();  // 1/(mu - lambda)
  const RealVector ratio =
      (spec.mu + spec.lambda).cwiseProduct(inv_diff);  // (mu+lambda)/(mu-lambda)
  const DenseMatrix gram = spec.design.transpose() * spec.design;
  const RealVector atb = spec.design.transpose() * spec.target;

  NaveProblem p;
  p.dim = d;
  p.f_eval = [gram, atb, inv_diff, ratio](const RealVector& x) {
    const RealVector grad = gram * x - atb;  // grad L = A^T(Ax - b)
    return RealVector(inv_diff.cwiseProduct(grad) + ratio.cwiseProduct(x));
  };
  p.jac_eval = [gram, inv_diff, ratio](const RealVector&) {
    DenseMatrix j = inv_diff.asDiagonal() * gram;
    j.diagonal() += ratio;
    return j;
  };
  p.rhs = RealVector::Zero(d);
  p.label = std::move(label);
  return p;
}

/// Gradient of the ridge objective's one-sided optimality condition,
/// grad L(x) + 2 lambda max(x,0) - 2 mu max(-x,0); zero at NAVE solutions.
inline RealVector ridge_stationarity(const RidgeSpec& spec,
                                     const RealVector& x) {
  const RealVector grad =
      spec.design.transpose() * (spec.design * x - spec.target);
  return grad + 2.0 * spec.lambda.cwiseProduct(x.cwiseMax(0.0)) -
         2.0 * spec.mu.cwiseProduct((-x).cwiseMax(0.0));
}

struct RidgeInstance {
  RidgeSpec spec;
  NaveProblem problem;
};

/// Seeded Table-1 style cell: A (m x d) and b entries uniform in [-5, 5],
/// constant penalty vectors (lambda_bar, mu_bar).
inline RidgeInstance make_ridge_instance(int m, int d, double lambda_bar,
                                         double mu_bar, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RidgeInstance inst;
  inst.spec.design = uniform_matrix(m, d, -5.0, 5.0, gen);
  inst.spec.target = uniform_vector(m, -5.0, 5.0, gen);
  inst.spec.lambda = RealVector::Constant(d, lambda_bar);
  inst.spec.mu = RealVector::Constant(d, mu_bar);
  std::ostringstream label;
  label << "ridge:seed=" << seed << ":m=" << m << ":d=" << d
        << ":lam=" << lambda_bar << ":mu=" << mu_bar;
  inst.problem = make_ridge(inst.spec, label.str());
  return inst;
}

// ---------------------------------------------------------------------------
// Sparse (l1) heuristic

/// Necessary condition of min L(x) + lambda ||x||_1 recast as the NAVE
/// x grad L(x) + lambda |x| = 0, i.e. F(x) - |x| = 0 with
/// F(x) = -(1/lambda) x .* grad L(x). `negate` flips to the mirrored sign
/// candidate +(1/lambda) x .* grad L(x).
inline NaveProblem make_sparse_heuristic(const DenseMatrix& a,
                                         const RealVector& b, double lambda,
                                         bool negate = false,
                                         std::string label = "sparse") {
  if (lambda <= 0.0) throw InvalidInput("make_sparse_heuristic: lambda > 0");
  const int d = static_cast<int>(a.cols());
  if (b.size() != a.rows())
    throw InvalidInput("make_sparse_heuristic: shape mismatch");
  const DenseMatrix gram = a.transpose() * a;
  const RealVector atb = a.transpose() * b;
  const double sign = negate ? 1.0 : -1.0;

  NaveProblem p;
  p.dim = d;
  p.f_eval = [gram, atb, lambda, sign](const RealVector& x) {
    const RealVector grad = gram * x - atb;
    return RealVector((sign / lambda) * x.cwiseProduct(grad));
  };
  p.jac_eval = [gram, atb, lambda, sign](const RealVector& x) {
    const RealVector grad = gram * x - atb;
    DenseMatrix j = x.asDiagonal() * gram;  // x_j * (grad^2 L)_{jk}
    j.diagonal() += grad;
    return DenseMatrix((sign / lambda) * j);
  };
  p.rhs = RealVector::Zero(d);
  p.label = std::move(label);
  return p;
}

// ---------------------------------------------------------------------------
// Finite-difference ODE discretizations

struct OdeDiscretization {
  double mesh_h = 0.0;
  int n_steps = 0;  // N; mesh t_i = i h, i = 0..N
  DenseMatrix a;
  std::optional<DenseMatrix> b_matrix;
  RealVector rhs;
  std::function<double(double)> exact_solution;  // may be empty
  enum class Boundary { IVP, BVP } boundary = Boundary::IVP;
  double x0 = 0.0;
  double y0 = 0.0;  // BVP right end value

  /// Mesh times of the unknowns (skips given boundary nodes).
  std::vector<double> unknown_times() const {
    std::vector<double> t;
    const int last = boundary == Boundary::BVP ? n_steps - 1 : n_steps;
    for (int i = 1; i <= last; ++i) t.push_back(i * mesh_h);
    return t;
  }
};

struct OdeNave {
  OdeDiscretization disc;
  NaveProblem problem;
};

/// Exact solution of the stiff equation xdd + 1001 xd - 1000|x| = 0 with
/// x(0) = x0 < 0, xd(0) = 0.
inline double stiff_exact(double t, double x0) {
  return x0 * (-(1.0 / 999.0) * std::exp(-1000.0 * t) +
               (1000.0 / 999.0) * std::exp(-t));
}

namespace detail {

// Backward second-derivative band (x_{i-2} - 2 x_{i-1} + x_i)/h^2 over
// unknowns x_1..x_N, boundary terms excluded (they go to the rhs).
inline DenseMatrix ivp_second_derivative(int n, double h) {
  DenseMatrix a = DenseMatrix::Zero(n, n);
  const double s = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    a(i, i) = s;
    if (i >= 1) a(i, i - 1) = -2.0 * s;
    if (i >= 2) a(i, i - 2) = s;
  }
  return a;
}

// Centered first derivative with the final-row 2nd-order backward formula
// (x_{N-2} - 4 x_{N-1} + 3 x_N)/(2h).
inline DenseMatrix ivp_first_derivative(int n, double h) {
  DenseMatrix b = DenseMatrix::Zero(n, n);
  const double s = 1.0 / (2.0 * h);
  for (int i = 0; i + 1 < n; ++i) {
    b(i, i + 1) = s;
    if (i >= 1) b(i, i - 1) = -s;
  }
  b(n - 1, n - 3) = s;
  b(n - 1, n - 2) = -4.0 * s;
  b(n - 1, n - 1) = 3.0 * s;
  return b;
}

}  // namespace detail

/// Stiff IVP xdd + 1001 xd - 1000 |x| = 0 on [0, T], x(0) = x0 < 0,
/// xd(0) = 0, discretized with the backward xdd stencil and centered xd
/// (2nd-order backward at the last node; x_{-1} = x_0 from the zero
/// initial velocity). NAVE form:
///   (1/1000) A x + (1001/1000) B x - |x| = b.
inline OdeNave make_stiff_ivp(double x0, double t_end, int n) {
  if (n < 3) throw InvalidInput("make_stiff_ivp: N >= 3");
  if (x0 >= 0.0) throw InvalidInput("make_stiff_ivp: x0 < 0 required");
  const double h = t_end / n;

  OdeNave out;
  out.disc.mesh_h = h;
  out.disc.n_steps = n;
  out.disc.a = detail::ivp_second_derivative(n, h);
  out.disc.b_matrix = detail::ivp_first_derivative(n, h);
  out.disc.boundary = OdeDiscretization::Boundary::IVP;
  out.disc.x0 = x0;
  out.disc.exact_solution = [x0](double t) { return stiff_exact(t, x0); };

  RealVector b = RealVector::Zero(n);
  b[0] = x0 * (1.0 / (1000.0 * h * h) + 1001.0 / (2000.0 * h));
  b[1] = -x0 / (1000.0 * h * h);
  out.disc.rhs = b;

  const DenseMatrix system =
      (1.0 / 1000.0) * out.disc.a + (1001.0 / 1000.0) * *out.disc.b_matrix;
  std::ostringstream label;
  label << "ode-stiff:h=" << h << ":T=" << t_end << ":x0=" << x0;
  out.problem = make_linear_ave(system, b, label.str());
  return out;
}

/// Boundary value variant on (0, T) with x(0) = x0, x(T) = y0, centered
/// xdd and first-order backward xd; unknowns are the N-1 interior nodes.
/// Pass y0 = stiff_exact(T, x0) for the manufactured-solution oracle.
inline OdeNave make_stiff_bvp(double x0, double y0, double t_end, int n) {
  if (n < 3) throw InvalidInput("make_stiff_bvp: N >= 3");
  if (x0 >= 0.0) throw InvalidInput("make_stiff_bvp: x0 < 0 required");
  const double h = t_end / n;
  const int dim = n - 1;

  OdeNave out;
  out.disc.mesh_h = h;
  out.disc.n_steps = n;
  out.disc.boundary = OdeDiscretization::Boundary::BVP;
  out.disc.x0 = x0;
  out.disc.y0 = y0;
  out.disc.exact_solution = [x0](double t) { return stiff_exact(t, x0); };

  DenseMatrix a = DenseMatrix::Zero(dim, dim);
  DenseMatrix bm = DenseMatrix::Zero(dim, dim);
  const double s2 = 1.0 / (h * h);
  const double s1 = 1.0 / h;
  for (int i = 0; i < dim; ++i) {
    a(i, i) = -2.0 * s2;
    if (i >= 1) a(i, i - 1) = s2;
    if (i + 1 < dim) a(i, i + 1) = s2;
    bm(i, i) = s1;
    if (i >= 1) bm(i, i - 1) = -s1;
  }
  out.disc.a = a;
  out.disc.b_matrix = bm;

  RealVector b = RealVector::Zero(dim);
  b[0] = -x0 * (1.0 / (1000.0 * h * h) - 1001.0 / (1000.0 * h));
  b[dim - 1] += -y0 / (1000.0 * h * h);
  out.disc.rhs = b;

  const DenseMatrix system = (1.0 / 1000.0) * a + (1001.0 / 1000.0) * bm;
  std::ostringstream label;
  label << "ode-bvp:h=" << h << ":T=" << t_end << ":x0=" << x0;
  out.problem = make_linear_ave(system, b, label.str());
  return out;
}

/// Manufactured source for the arctan equation with exact solution
/// cos(pi t): f(t) = arctan(cos(pi t)) - |cos(pi t)| - pi^2 cos(pi t).
inline double arctan_source(double t) {
  const double c = std::cos(M_PI * t);
  return std::atan(c) - std::abs(c) - M_PI * M_PI * c;
}

/// xdd + arctan(x) - |x| = f(t), x(0) = x0, xd(0) = 0, with the stiff
/// example's A stencil: A x + arctan(x) - |x| = b.
inline OdeNave make_arctan_ivp(double x0, double t_end, int n) {
  if (n < 3) throw InvalidInput("make_arctan_ivp: N >= 3");
  const double h = t_end / n;

  OdeNave out;
  out.disc.mesh_h = h;
  out.disc.n_steps = n;
  out.disc.a = detail::ivp_second_derivative(n, h);
  out.disc.boundary = OdeDiscretization::Boundary::IVP;
  out.disc.x0 = x0;
  if (std::abs(x0 - 1.0) < 1e-14)
    out.disc.exact_solution = [](double t) { return std::cos(M_PI * t); };

  RealVector b(n);
  for (int i = 0; i < n; ++i) b[i] = arctan_source((i + 1) * h);
  b[0] += x0 / (h * h);
  b[1] -= x0 / (h * h);
  out.disc.rhs = b;

  const DenseMatrix a = out.disc.a;
  NaveProblem p;
  p.dim = n;
  p.f_eval = [a](const RealVector& x) {
    return RealVector(a * x + x.array().atan().matrix());
  };
  p.jac_eval = [a](const RealVector& x) {
    DenseMatrix j = a;
    j.diagonal() += (1.0 / (1.0 + x.array().square())).matrix();
    return j;
  };
  p.rhs = b;
  std::ostringstream label;
  label << "ode-arctan:h=" << h << ":T=" << t_end << ":x0=" << x0;
  p.label = label.str();
  out.problem = p;
  return out;
}

/// Infinity-norm error of a mesh solution against the exact oracle.
inline double ode_error_inf(const OdeNave& ode, const RealVector& x) {
  if (!ode.disc.exact_solution)
    throw InvalidInput("ode_error_inf: no exact solution attached");
  const std::vector<double> times = ode.disc.unknown_times();
  if (static_cast<int>(times.size()) != x.size())
    throw InvalidInput("ode_error_inf: dimension mismatch");
  double err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    err = std::max(err, std::abs(x[static_cast<int>(i)] -
                                 ode.disc.exact_solution(times[i])));
  return err;
}

// ---------------------------------------------------------------------------
// Problem IDs (CLI surface)

namespace detail {

inline std::map<std::string, std::string> parse_kv(
    const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> kv;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw ConfigError("problem id: expected key=value, got `" + tok + "`");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

inline std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ':')) parts.push_back(tok);
  return parts;
}

template <typename T>
T kv_get(const std::map<std::string, std::string>& kv, const std::string& key,
         std::optional<T> fallback = std::nullopt) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw ConfigError("problem id: missing key `" + key + "`");
  }
  std::istringstream is(it->second);
  T value;
  if (!(is >> value))
    throw ConfigError("problem id: bad value for `" + key + "`");
  return value;
}

}  // namespace detail

/// Resolve a textual problem id:
///   tridiag:d=..:mode={xstar|randb}:seed=..
///   r3:{b1|b2|b3|zero}     r4:{bstar1|bstar2|bstar3|zero}
///   ridge:seed=..:m=..:d=..:lam=..:mu=..
///   sparse:seed=..:lam=..[:m=..][:d=..]
///   ode-stiff:h=..:T=..:x0=..   ode-bvp:h=..:T=..:x0=..[:y0=..]
///   ode-arctan:h=..:T=..:x0=..
inline NaveProblem problem_from_id(const std::string& id) {
  const std::vector<std::string> parts = detail::split_colon(id);
  if (parts.empty()) throw ConfigError("empty problem id");
  const std::string& kind = parts.front();
  const std::vector<std::string> rest(parts.begin() + 1, parts.end());

  if (kind == "r3" || kind == "r4") {
    if (rest.size() != 1) throw ConfigError(id + ": expected one b selector");
    const std::string& sel = rest.front();
    const bool is_r3 = kind == "r3";
    if (sel == "zero")
      return is_r3 ? make_example_r3(RealVector::Zero(3), id)
                   : make_example_r4(RealVector::Zero(4), id);
    const std::string prefix = is_r3 ? "b" : "bstar";
    if (sel.rfind(prefix, 0) != 0 || sel.size() != prefix.size() + 1)
      throw ConfigError(id + ": unknown selector `" + sel + "`");
    const int which = sel.back() - '0';
    return is_r3 ? make_example_r3(r3_rhs(which), id)
                 : make_example_r4(r4_rhs(which), id);
  }

  const auto kv = detail::parse_kv(rest);
  if (kind == "tridiag") {
    const int d = detail::kv_get<int>(kv, "d");
    const std::string mode =
        detail::kv_get<std::string>(kv, "mode", std::string("randb"));
    const std::uint64_t seed =
        detail::kv_get<std::uint64_t>(kv, "seed", std::uint64_t{42});
    if (mode != "xstar" && mode != "randb")
      throw ConfigError(id + ": mode must be xstar or randb");
    return make_tridiag(d,
                        mode == "xstar" ? TridiagMode::FromXStar
                                        : TridiagMode::RandomB,
                        seed)
        .problem;
  }
  if (kind == "ridge") {
    return make_ridge_instance(
               detail::kv_get<int>(kv, "m"), detail::kv_get<int>(kv, "d"),
               detail::kv_get<double>(kv, "lam"),
               detail::kv_get<double>(kv, "mu"),
               detail::kv_get<std::uint64_t>(kv, "seed", std::uint64_t{42}))
        .problem;
  }
  if (kind == "sparse") {
    const int m = detail::kv_get<int>(kv, "m", 20);
    const int d = detail::kv_get<int>(kv, "d", 40);
    const double lam = detail::kv_get<double>(kv, "lam");
    std::mt19937_64 gen(
        detail::kv_get<std::uint64_t>(kv, "seed", std::uint64_t{42}));
    const DenseMatrix a = uniform_matrix(m, d, -1.0, 1.0, gen);
    const RealVector b = uniform_vector(m, -0.05, 0.0, gen);
    return make_sparse_heuristic(a, b, lam, false, id);
  }
  if (kind == "ode-stiff" || kind == "ode-bvp" || kind == "ode-arctan") {
    const double h = detail::kv_get<double>(kv, "h");
    const double t_end = detail::kv_get<double>(kv, "T");
    const double x0 = detail::kv_get<double>(kv, "x0");
    if (h <= 0.0 || t_end <= 0.0) throw ConfigError(id + ": need h, T > 0");
    const int n = static_cast<int>(std::lround(t_end / h));
    if (kind == "ode-stiff") return make_stiff_ivp(x0, t_end, n).problem;
    if (kind == "ode-arctan") return make_arctan_ivp(x0, t_end, n).problem;
    const double y0 =
        detail::kv_get<double>(kv, "y0", stiff_exact(t_end, x0));
    return make_stiff_bvp(x0, y0, t_end, n).problem;
  }
  throw ConfigError("unknown problem kind `" + kind + "` in id `" + id + "`");
}

}  // namespace nave
