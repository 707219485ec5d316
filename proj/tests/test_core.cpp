#include <catch2/catch_amalgamated.hpp>

#include "nave/core.hpp"
#include "nave/io.hpp"
#include "nave/problems.hpp"
#include "nave/rng.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace nave;

namespace {

RealVector vec(std::initializer_list<double> vals) {
  RealVector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("split takes positive and negative parts componentwise") {
  const SplitPair p = split(vec({2.0, -3.0}));
  CHECK(p.y.isApprox(vec({2.0, 0.0})));
  CHECK(p.z.isApprox(vec({0.0, 3.0})));

  const SplitPair zero = split(vec({0.0, 0.0}));
  CHECK(zero.y.isZero());
  CHECK(zero.z.isZero());

  const SplitPair q = split(vec({1.5, -0.25, 0.0}));
  CHECK(q.y.isApprox(vec({1.5, 0.0, 0.0})));
  CHECK(q.z.isApprox(vec({0.0, 0.25, 0.0})));

  RealVector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(split(bad), InvalidInput);
}

TEST_CASE("merge is the inverse of split") {
  CHECK(merge({vec({2, 0}), vec({0, 3})}).isApprox(vec({2, -3})));
  CHECK(merge({vec({1, 1}), vec({1, 1})}).isZero());
  CHECK(merge({vec({5, 0, 2}), vec({0, 4, 2})}).isApprox(vec({5, -4, 0})));
  CHECK_THROWS_AS(merge({vec({1, 2}), vec({1, 2, 3})}), InvalidInput);
}

TEST_CASE("merge(split(x)) round trip and complementarity of the parts") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int t = 0; t < 200; ++t) {
    RealVector x(17);
    for (int i = 0; i < 17; ++i) x[i] = dist(gen);
    const SplitPair p = split(x);
    CHECK(merge(p) == x);  // exact, not approximate
    for (int i = 0; i < 17; ++i) {
      CHECK(p.y[i] * p.z[i] == 0.0);
      CHECK(p.y[i] + p.z[i] == std::abs(x[i]));
      CHECK(p.y[i] >= 0.0);
      CHECK(p.z[i] >= 0.0);
    }
  }
}

TEST_CASE("nave_residual matches hand evaluation on the R^3 example") {
  const NaveProblem p = make_example_r3(r3_rhs(1));
  const RealVector r = nave_residual(p, vec({1, 0, 0}));
  CHECK(r.isApprox(vec({0, 8, -13}), 1e-14));
}

TEST_CASE("nave_residual vanishes when F is the identity at zero") {
  NaveProblem p;
  p.dim = 4;
  p.f_eval = [](const RealVector& x) { return x; };
  p.rhs = RealVector::Zero(4);
  p.label = "identity";
  CHECK(nave_residual(p, RealVector::Zero(4)).norm() == 0.0);
}

TEST_CASE("nave_residual is exactly zero at a constructed solution") {
  const TridiagInstance inst = make_tridiag(8, TridiagMode::FromXStar, 11);
  CHECK(nave_residual(inst.problem, inst.x_star).norm() == 0.0);
}

TEST_CASE("nave_residual rejects misbehaving evaluation handles") {
  NaveProblem p;
  p.dim = 2;
  p.f_eval = [](const RealVector&) { return RealVector::Zero(3); };
  p.rhs = RealVector::Zero(2);
  CHECK_THROWS_AS(nave_residual(p, RealVector::Zero(2)), EvaluationFailure);
  p.f_eval = [](const RealVector&) {
    RealVector v(2);
    v << 1.0, std::numeric_limits<double>::infinity();
    return v;
  };
  CHECK_THROWS_AS(nave_residual(p, RealVector::Zero(2)), EvaluationFailure);
  CHECK_THROWS_AS(nave_residual(p, RealVector::Zero(5)), InvalidInput);
}

TEST_CASE("fd_jacobian reproduces an affine map to rounding") {
  std::mt19937_64 gen(3);
  const DenseMatrix a = gaussian_matrix(5, 5, gen);
  NaveProblem p;
  p.dim = 5;
  p.f_eval = [a](const RealVector& x) { return RealVector(a * x); };
  p.rhs = RealVector::Zero(5);
  const RealVector x = uniform_vector(5, -2.0, 2.0, gen);
  const DenseMatrix fd = fd_jacobian(p, x, 1e-6);
  CHECK((fd - a).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("fd_jacobian catches the quadratic diagonal") {
  NaveProblem p;
  p.dim = 3;
  p.f_eval = [](const RealVector& x) {
    return RealVector(x.array().square().matrix());
  };
  p.rhs = RealVector::Zero(3);
  const DenseMatrix fd = fd_jacobian(p, RealVector::Ones(3), 1e-5);
  for (int i = 0; i < 3; ++i) CHECK(fd(i, i) == Catch::Approx(2.0).margin(1e-8));
  CHECK_THROWS_AS(fd_jacobian(p, RealVector::Ones(3), 0.0), InvalidInput);
}

TEST_CASE("fd_jacobian agrees with the analytic R^3 Jacobian") {
  const NaveProblem p = make_example_r3();
  const RealVector x = vec({0, 1, 1});
  const DenseMatrix fd = fd_jacobian(p, x, 1e-6);
  const DenseMatrix an = p.jac_eval(x);
  CHECK((fd - an).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("matrix and vector text format round trips") {
  std::mt19937_64 gen(19);
  const DenseMatrix m = gaussian_matrix(4, 7, gen);
  std::stringstream buf;
  write_matrix(buf, m);
  const DenseMatrix back = read_matrix(buf);
  CHECK(back.rows() == 4);
  CHECK(back.cols() == 7);
  CHECK(back == m);

  const RealVector v = uniform_vector(9, -3.0, 3.0, gen);
  std::stringstream vbuf;
  write_vector(vbuf, v);
  CHECK(read_vector(vbuf) == v);

  std::stringstream bad("dims: 2 2\n1 2 3\n");
  CHECK_THROWS_AS(read_matrix(bad), InvalidInput);
  std::stringstream nohdr("1 2\n3 4\n");
  CHECK_THROWS_AS(read_matrix(nohdr), InvalidInput);
}
