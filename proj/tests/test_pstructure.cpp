#include <catch2/catch_amalgamated.hpp>

#include "nave/problems.hpp"
#include "nave/pstructure.hpp"

#include <random>

using namespace nave;

namespace {

DenseMatrix mat2(double a, double b, double c, double d) {
  DenseMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

double max_product(const DenseMatrix& a, const RealVector& v) {
  return (a * v).cwiseProduct(v).maxCoeff();
}

// Rescale singular values into [1.05, 3] so that sigma_min(A) > 1.
DenseMatrix sigma_min_above_one(int d, std::mt19937_64& gen) {
  const DenseMatrix g = gaussian_matrix(d, d, gen);
  Eigen::JacobiSVD<DenseMatrix> svd(
      g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector s = svd.singularValues();
  const double lo = s[d - 1], hi = s[0];
  for (int i = 0; i < d; ++i)
    s[i] = hi > lo ? 1.05 + (s[i] - lo) / (hi - lo) * 1.95 : 2.0;
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

TEST_CASE("exact minor enumeration classifies the basic cases") {
  const P0Verdict id3 = is_p0_matrix_exact(DenseMatrix::Identity(3, 3), true);
  CHECK(id3.kind == P0Kind::ExactP);
  CHECK(id3.minors_checked == 7);
  CHECK(id3.is_p());

  DenseMatrix neg(1, 1);
  neg << -1.0;
  const P0Verdict bad = is_p0_matrix_exact(neg);
  CHECK(bad.kind == P0Kind::ExactNotP0);
  REQUIRE(bad.certificate.has_value());
  CHECK(bad.certificate->index_set == std::vector<int>{0});
  CHECK(bad.certificate->value < 0.0);

  // tridiag(-1, 4, -1), d = 3: leading minors 4, 15, 56 and every other
  // principal minor positive.
  const P0Verdict tri = is_p0_matrix_exact(tridiag_matrix(3), true);
  CHECK(tri.kind == P0Kind::ExactP);
  CHECK(tridiag_matrix(3).determinant() == Catch::Approx(56.0));

  const P0Verdict skew = is_p0_matrix_exact(mat2(0, 2, -2, 0));
  CHECK(skew.kind == P0Kind::ExactP0);  // minors 0, 0, 4

  CHECK_THROWS_AS(is_p0_matrix_exact(DenseMatrix::Identity(17, 17)),
                  SizeLimit);
  CHECK_THROWS_AS(is_p0_matrix_exact(DenseMatrix::Zero(2, 3)), InvalidInput);
}

TEST_CASE("randomized refuter finds pointwise witnesses") {
  DenseMatrix neg(1, 1);
  neg << -1.0;
  const P0Verdict bad = p0_refute_randomized(neg, 10, 1);
  CHECK(bad.kind == P0Kind::RefutedP0);
  REQUIRE(bad.certificate.has_value());
  CHECK(max_product(neg, bad.certificate->vector) < 0.0);

  const P0Verdict id50 =
      p0_refute_randomized(DenseMatrix::Identity(50, 50), 1000, 2);
  CHECK(id50.kind == P0Kind::ProbablyP0);

  CHECK(p0_refute_randomized(mat2(0, 2, -2, 0), 500, 3).kind ==
        P0Kind::ProbablyP0);
}

TEST_CASE("exact and randomized tests agree on all small integer matrices") {
  // Exhaustive 2x2 over entries {-2,...,2}.
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          const DenseMatrix m = mat2(a, b, c, d);
          const P0Verdict exact = is_p0_matrix_exact(m);
          const P0Verdict rand = p0_refute_randomized(m, 40, 11);
          if (exact.is_p0()) CHECK(rand.kind == P0Kind::ProbablyP0);
          if (rand.kind == P0Kind::RefutedP0) {
            CHECK(exact.kind == P0Kind::ExactNotP0);
            CHECK(max_product(m, rand.certificate->vector) < 0.0);
          }
        }

  // Seeded sample of the 3x3 family.
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < 3000; ++t) {
    DenseMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = entry(gen);
    const P0Verdict exact = is_p0_matrix_exact(m);
    const P0Verdict rand = p0_refute_randomized(m, 40, 1000 + t);
    if (exact.is_p0()) CHECK(rand.kind == P0Kind::ProbablyP0);
    if (rand.kind == P0Kind::RefutedP0)
      CHECK(exact.kind == P0Kind::ExactNotP0);
  }
}

TEST_CASE("lemma probe: invertibility of Delta1 + Delta2 A") {
  CHECK(lemma3_probe(DenseMatrix::Identity(3, 3), 100, 5));

  // [[-1]]: the proof's construction gives delta1 = 1, Delta2 = 1 and
  // det(1 + 1 * (-1)) = 0.
  DenseMatrix neg(1, 1);
  neg << -1.0;
  CHECK(lemma3_probe(neg, 50, 6));

  CHECK(lemma3_probe(tridiag_matrix(4), 200, 7));

  // A 2x2 that is not P0 goes through the constructive singular branch.
  CHECK(lemma3_probe(mat2(-1, 0, 0, 1), 100, 8));
  CHECK(lemma3_probe(mat2(-2, 1, 1, -2), 100, 9));
}

TEST_CASE("sampled P0-map checks on the shifted Jacobians") {
  NaveProblem scale4;
  scale4.dim = 2;
  scale4.f_eval = [](const RealVector& x) { return RealVector(4.0 * x); };
  scale4.jac_eval = [](const RealVector&) {
    return DenseMatrix(4.0 * DenseMatrix::Identity(2, 2));
  };
  scale4.rhs = RealVector::Zero(2);
  scale4.label = "4x";

  CHECK(p0_map_sample_check(scale4, MapShift::FminusI, -3, 3, 20, 1).kind ==
        P0Kind::ProbablyP0);
  const P0Verdict refuted =
      p0_map_sample_check(scale4, MapShift::NegFplusI, -3, 3, 20, 1);
  CHECK(refuted.kind == P0Kind::RefutedP0);
  REQUIRE(refuted.certificate.has_value());
  CHECK(refuted.certificate->sample_point.size() == 2);

  // grad F - I of the R^3 example has diagonal (1, 1+3x2^2, 1+6x3^2)
  // dominating the off-diagonal -1/+1 pair.
  CHECK(p0_map_sample_check(make_example_r3(), MapShift::FminusI, -3, 3, 100,
                            2)
            .kind == P0Kind::ProbablyP0);
}

TEST_CASE("affine bridge: map check equals matrix check") {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < 40; ++t) {
    DenseMatrix a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = entry(gen);
    // F(x) = (A + I)x + c, so grad F - I == A at every sample.
    const DenseMatrix shifted = a + DenseMatrix::Identity(3, 3);
    const RealVector c = uniform_vector(3, -1.0, 1.0, gen);
    NaveProblem p;
    p.dim = 3;
    p.f_eval = [shifted, c](const RealVector& x) {
      return RealVector(shifted * x + c);
    };
    p.jac_eval = [shifted](const RealVector&) { return shifted; };
    p.rhs = RealVector::Zero(3);
    p.label = "affine";

    const P0Verdict map_v =
        p0_map_sample_check(p, MapShift::FminusI, -2, 2, 10, 100 + t);
    const P0Verdict mat_v = is_p0_matrix_exact(a);
    CHECK(map_v.is_p0() == mat_v.is_p0());
  }
}

TEST_CASE("singular values above one give the P0 LCP matrix") {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix a = sigma_min_above_one(4, gen);
    Eigen::JacobiSVD<DenseMatrix> svd(a);
    REQUIRE(svd.singularValues()(3) > 1.0);

    const DenseMatrix eye = DenseMatrix::Identity(4, 4);
    CHECK(std::abs(DenseMatrix(a + eye).determinant()) > 1e-12);
    CHECK(std::abs(DenseMatrix(a - eye).determinant()) > 1e-12);
    const DenseMatrix m =
        DenseMatrix(a + eye).partialPivLu().solve(DenseMatrix(a - eye));
    CHECK(p0_refute_randomized(m, 300, 500 + t).kind == P0Kind::ProbablyP0);
  }
}
