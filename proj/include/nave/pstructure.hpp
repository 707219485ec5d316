#pragma once

#include "nave/core.hpp"
#include "nave/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

/// P0/P structure tests. A matrix is P0 (respectively P) when every
/// principal minor is >= 0 (respectively > 0); the equivalent pointwise
/// form says max_j (Av)^j v^j >= 0 (> 0) for every v != 0. Exact minor
/// enumeration is feasible up to d = 16; beyond that only the randomized
/// refuter applies. The nonlinear analogue (P0-map) is sampled through the
/// Jacobian: a C1 map is P0 iff its Jacobian is a P0-matrix everywhere.
namespace nave {

enum class P0Kind { ExactP, ExactP0, ExactNotP0, ProbablyP0, RefutedP0 };

inline const char* to_string(P0Kind k) {
  switch (k) {
    case P0Kind::ExactP: return "ExactP";
    case P0Kind::ExactP0: return "ExactP0";
    case P0Kind::ExactNotP0: return "ExactNotP0";
    case P0Kind::ProbablyP0: return "ProbablyP0";
    case P0Kind::RefutedP0: return "RefutedP0";
  }
  return "?";
}

struct P0Certificate {
  std::vector<int> index_set;  // I with det(A_II) < 0 (minor route)
  RealVector vector;           // v with max_j (Av)^j v^j < 0 (pointwise route)
  RealVector sample_point;     // x at which a sampled Jacobian failed
  double value = 0.0;          // the offending minor / max-product
};

struct P0Verdict {
  P0Kind kind = P0Kind::ExactNotP0;
  std::optional<P0Certificate> certificate;
  std::int64_t minors_checked = 0;

  bool is_p0() const {
    return kind == P0Kind::ExactP || kind == P0Kind::ExactP0 ||
           kind == P0Kind::ProbablyP0;
  }
  bool is_p() const { return kind == P0Kind::ExactP; }
};

namespace detail {

inline double minor_tolerance(const DenseMatrix& a) {
  // Floating determinants need a scale-aware zero test.
  const double full = std::abs(a.determinant());
  return 1e-12 * std::max(1.0, full);
}

inline DenseMatrix principal_submatrix(const DenseMatrix& a,
                                       const std::vector<int>& idx) {
  DenseMatrix sub(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      sub(i, j) = a(idx[i], idx[j]);
  return sub;
}

inline double max_product(const DenseMatrix& a, const RealVector& v) {
  const RealVector av = a * v;
  return (av.cwiseProduct(v)).maxCoeff();
}

}  // namespace detail

/// Enumerates all 2^d - 1 principal minors. `strict` only selects which
/// boundary certificate is attached: a P0-but-not-P matrix always comes
/// back ExactP0, carrying its zero minor when strict is requested.
inline P0Verdict is_p0_matrix_exact(const DenseMatrix& a, bool strict = false) {
  if (a.rows() != a.cols()) throw InvalidInput("is_p0_matrix_exact: not square");
  const int d = static_cast<int>(a.rows());
  if (d > 16)
    throw SizeLimit("is_p0_matrix_exact: d > 16, use p0_refute_randomized");
  const double tol = detail::minor_tolerance(a);

  P0Verdict verdict;
  bool any_zero = false;
  std::optional<P0Certificate> zero_cert;
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const double det = detail::principal_submatrix(a, idx).determinant();
    ++verdict.minors_checked;
    if (det < -tol) {
      verdict.kind = P0Kind::ExactNotP0;
      P0Certificate cert;
      cert.index_set = idx;
      cert.value = det;
      verdict.certificate = cert;
      return verdict;
    }
    if (det <= tol && !any_zero) {
      any_zero = true;
      P0Certificate cert;
      cert.index_set = idx;
      cert.value = det;
      zero_cert = cert;
    }
  }
  verdict.kind = any_zero ? P0Kind::ExactP0 : P0Kind::ExactP;
  if (any_zero && strict) verdict.certificate = zero_cert;
  return verdict;
}

/// Randomized refutation via the pointwise characterization: sample
/// standard-normal v, then greedily flip coordinate signs while that
/// lowers max_j (Av)^j v^j. A witness below -1e-12 refutes P0.
inline P0Verdict p0_refute_randomized(const DenseMatrix& a, int trials,
                                      std::uint64_t seed) {
  if (a.rows() != a.cols())
    throw InvalidInput("p0_refute_randomized: not square");
  const int d = static_cast<int>(a.rows());
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  P0Verdict verdict;
  for (int t = 0; t < trials; ++t) {
    RealVector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(gen);
    double best = detail::max_product(a, v);
    // Sign-flip local search.
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps++ < 8) {
      improved = false;
      for (int i = 0; i < d; ++i) {
        v[i] = -v[i];
        const double cand = detail::max_product(a, v);
        if (cand < best) {
          best = cand;
          improved = true;
        } else {
          v[i] = -v[i];
        }
      }
    }
    if (best < -1e-12) {
      verdict.kind = P0Kind::RefutedP0;
      P0Certificate cert;
      cert.vector = v;
      cert.value = best;
      verdict.certificate = cert;
      return verdict;
    }
  }
  verdict.kind = P0Kind::ProbablyP0;
  return verdict;
}

/// Probes the characterization "A is P0 iff Delta1 + Delta2 A is invertible
/// for every positive diagonal Delta1 and nonnegative diagonal Delta2".
/// For a P0 matrix, random probes must all be invertible; for a refuted
/// matrix, the constructive Delta1 with delta1_i = -(Av)^i / v^i and
/// Delta2 = I must be singular. Returns true when the observed behavior
/// matches the asserted direction.
inline bool lemma3_probe(const DenseMatrix& a, int trials,
                         std::uint64_t seed) {
  if (a.rows() != a.cols()) throw InvalidInput("lemma3_probe: not square");
  const int d = static_cast<int>(a.rows());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const P0Verdict exact = is_p0_matrix_exact(a);

  std::mt19937_64 gen(seed);
  if (exact.is_p0()) {
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    std::uniform_real_distribution<double> nonneg(0.0, 10.0);
    for (int t = 0; t < trials; ++t) {
      DenseMatrix probe = a;
      for (int i = 0; i < d; ++i) {
        const double d2 = nonneg(gen);
        probe.row(i) *= d2;
        probe(i, i) += pos(gen);
      }
      if (std::abs(probe.determinant()) <= 1e-12 * std::max(1.0, scale))
        return false;  // lemma violated: P0 but a probe went singular
    }
    return true;
  }

  // Not P0: recover a pointwise witness, then build the proof's Delta1.
  const P0Verdict refuted =
      p0_refute_randomized(a, std::max(trials, 200), splitmix64(seed));
  if (refuted.kind != P0Kind::RefutedP0)
    throw ProbeDegenerate(
        "lemma3_probe: exact test refutes P0 but no pointwise witness found");
  const RealVector& v = refuted.certificate->vector;
  const RealVector av = a * v;
  DenseMatrix singular = a;  // Delta2 = I
  for (int i = 0; i < d; ++i) {
    if (v[i] == 0.0 && av[i] != 0.0)
      throw ProbeDegenerate("lemma3_probe: witness has a zero coordinate");
    singular(i, i) += (v[i] == 0.0) ? 0.0 : -av[i] / v[i];
  }
  // (Delta1 + Delta2 A) v = 0 by construction, so the determinant must
  // vanish up to rounding.
  return std::abs(singular.determinant()) <= 1e-9 * std::max(1.0, scale);
}

enum class MapShift { FminusI, NegFplusI };

/// Samples the P0-map precondition over a box: checks the shifted Jacobian
/// (grad F - I, or -grad F - I) for the P0 property at uniform sample
/// points. A single failing sample refutes; otherwise ProbablyP0.
inline P0Verdict p0_map_sample_check(const NaveProblem& p, MapShift shift,
                                     double lo, double hi, int samples,
                                     std::uint64_t seed) {
  if (p.dim > 16)
    throw SizeLimit("p0_map_sample_check: d > 16 exact minors per sample");
  if (hi <= lo) throw InvalidInput("p0_map_sample_check: empty box");
  std::mt19937_64 gen(seed);
  const DenseMatrix eye = DenseMatrix::Identity(p.dim, p.dim);

  P0Verdict verdict;
  for (int s = 0; s < samples; ++s) {
    const RealVector x = uniform_vector(p.dim, lo, hi, gen);
    const DenseMatrix jac = problem_jacobian(p, x);
    const DenseMatrix shifted =
        shift == MapShift::FminusI ? DenseMatrix(jac - eye)
                                   : DenseMatrix(-jac - eye);
    const P0Verdict point = is_p0_matrix_exact(shifted);
    verdict.minors_checked += point.minors_checked;
    if (point.kind == P0Kind::ExactNotP0) {
      verdict.kind = P0Kind::RefutedP0;
      P0Certificate cert = *point.certificate;
      cert.sample_point = x;
      verdict.certificate = cert;
      return verdict;
    }
  }
  verdict.kind = P0Kind::ProbablyP0;
  return verdict;
}

}  // namespace nave
