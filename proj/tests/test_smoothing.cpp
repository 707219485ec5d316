#include <catch2/catch_amalgamated.hpp>

#include "nave/smoothing.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace nave;
using Catch::Approx;

namespace {

// Central-difference oracle for the G_r partials.
GrPartials fd_gr(const SmoothingFamily& fam, double y, double z, double r,
                 double h = 1e-7) {
  GrPartials out;
  out.d_yi = (gr_component(fam, y + h, z, r) - gr_component(fam, y - h, z, r)) /
             (2 * h);
  out.d_zi = (gr_component(fam, y, z + h, r) - gr_component(fam, y, z - h, r)) /
             (2 * h);
  out.d_r = (gr_component(fam, y, z, r + h) - gr_component(fam, y, z, r - h)) /
            (2 * h);
  return out;
}

SmoothingFamily generic_theta2() {
  SmoothingFamily fam = make_theta2();
  fam.gr_override = nullptr;
  fam.gr_partials_override = nullptr;
  return fam;
}

}  // namespace

TEST_CASE("theta1 kernel values") {
  const SmoothingFamily f = make_theta1();
  CHECK(f.theta(1.0) == 0.5);
  CHECK(f.theta(-2.0) == -2.0);
  CHECK(f.psi_inv(0.25) == Approx(3.0));
  CHECK(f.psi(0.0) == 1.0);
  CHECK(f.psi_prime(2.0) == Approx(-1.0 / 9.0));
  CHECK(f.psi_prime(-3.0) == -1.0);
  CHECK_THROWS_AS(f.psi_inv(0.0), DomainError);
  CHECK_THROWS_AS(f.psi_inv(-1.0), DomainError);
}

TEST_CASE("theta2 kernel values") {
  const SmoothingFamily f = make_theta2();
  CHECK(f.theta(0.0) == 0.0);
  CHECK(f.psi(std::log(2.0)) == Approx(0.5));
  CHECK(f.psi_inv(1.0) == 0.0);
  CHECK(f.psi_prime(0.0) == -1.0);
  CHECK_THROWS_AS(f.psi_inv(0.0), DomainError);
}

TEST_CASE("theta axioms hold on a wide grid") {
  for (const SmoothingFamily& f : {make_theta1(), make_theta2()}) {
    CHECK(f.theta(0.0) == 0.0);
    std::vector<double> grid;
    for (double t = -10.0; t <= 1e3; t += 0.37) grid.push_back(t);
    double prev = f.theta(grid.front());
    double prev_diff = 0.0;
    bool first_diff = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double cur = f.theta(grid[i]);
      const double diff = cur - prev;
      CHECK(diff >= -1e-12);  // nondecreasing
      if (!first_diff) CHECK(diff - prev_diff <= 1e-12);  // concave
      first_diff = false;
      prev_diff = diff;
      prev = cur;
      CHECK(cur <= 1.0);  // theta2 rounds to 1.0 beyond t ~ 37
      if (grid[i] < 30.0) CHECK(cur < 1.0);
    }
    for (double t : {-8.0, -1.0, -1e-3}) CHECK(f.theta(t) < 0.0);
  }
  CHECK(make_theta2().theta(1e6) > 1.0 - 1e-3);
  CHECK(make_theta1().theta(1e6) == Approx(1e6 / (1e6 + 1.0)));
}

TEST_CASE("psi_inv round trips psi") {
  for (const SmoothingFamily& f : {make_theta1(), make_theta2()}) {
    for (double t = -5.0; t <= 50.0; t += 0.173) {
      const double back = f.psi_inv(f.psi(t));
      CHECK(std::abs(back - t) <= 1e-10 * std::max(1.0, std::abs(t)));
    }
  }
  const SmoothingFamily ce = make_log_counterexample();
  for (double t : {0.2, 1.0, 7.0, 42.0}) {
    CHECK(ce.psi_inv(ce.psi(t)) == Approx(t).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ce.psi(-1.0), DomainError);
}

TEST_CASE("gr_component known values") {
  const SmoothingFamily t1 = make_theta1();
  const SmoothingFamily t2 = make_theta2();
  CHECK(gr_component(t2, 1.0, 1.0, 0.5) == Approx(0.6534264097200273));
  CHECK(gr_component(t2, 3.0, 0.5, 0.01) == Approx(0.5).margin(1e-10));
  for (double r : {2.0, 1.0, 0.25, 1e-3})
    CHECK(gr_component(t1, 0.0, 0.0, r) == Approx(-r));
  CHECK_THROWS_AS(gr_component(t1, 1.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("gr_component is symmetric in (yi, zi)") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-2.0, 6.0);
  std::uniform_real_distribution<double> rdist(0.05, 2.0);
  for (const SmoothingFamily& f : {make_theta1(), make_theta2()}) {
    for (int t = 0; t < 100; ++t) {
      const double a = dist(gen), b = dist(gen), r = rdist(gen);
      CHECK(gr_component(f, a, b, r) == gr_component(f, b, a, r));
    }
  }
}

TEST_CASE("theta2 G_r approximates min within r log 2") {
  const SmoothingFamily t2 = make_theta2();
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    for (int t = 0; t < 50; ++t) {
      const double a = dist(gen), b = dist(gen);
      CHECK(std::abs(gr_component(t2, a, b, r) - std::min(a, b)) <= 10.0 * r);
    }
  }
}

TEST_CASE("theta1 G_r increases monotonically to yz/(y+z) as r drops") {
  // The rational kernel's limit is the harmonic combination yz/(y+z),
  // which agrees with min(y, z) exactly on complementary pairs.
  const SmoothingFamily t1 = make_theta1();
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  for (int t = 0; t < 30; ++t) {
    const double y = dist(gen), z = dist(gen);
    double prev = -1e9;
    for (double r : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const double g = gr_component(t1, y, z, r);
      CHECK(g >= prev);
      prev = g;
    }
    CHECK(prev == Approx(y * z / (y + z)).epsilon(1e-4));
    CHECK(gr_component(t1, 0.0, z, 1e-9) == Approx(0.0).margin(1e-8));
  }
}

TEST_CASE("gr_partials match finite differences") {
  for (const SmoothingFamily& f : {make_theta1(), make_theta2()}) {
    const GrPartials an = gr_partials(f, 1.0, 2.0, 0.3);
    const GrPartials fd = fd_gr(f, 1.0, 2.0, 0.3);
    CHECK(an.d_yi == Approx(fd.d_yi).epsilon(1e-6));
    CHECK(an.d_zi == Approx(fd.d_zi).epsilon(1e-6));
    CHECK(an.d_r == Approx(fd.d_r).epsilon(1e-6));
  }
}

TEST_CASE("gr_partials symmetric diagonal and r-slope special cases") {
  const SmoothingFamily t2 = make_theta2();
  for (double t : {0.2, 1.0, 3.0}) {
    const GrPartials g = gr_partials(t2, t, t, 0.7);
    CHECK(g.d_yi == Approx(0.5));
    CHECK(g.d_zi == Approx(0.5));
  }
  const SmoothingFamily t1 = make_theta1();
  const GrPartials g0 = gr_partials(t1, 0.0, 0.0, 0.4);
  CHECK(g0.d_r == Approx(-1.0));
}

TEST_CASE("theta2 stable overrides agree with the generic psi path") {
  const SmoothingFamily stable = make_theta2();
  const SmoothingFamily generic = generic_theta2();
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> dist(-1.0, 5.0);
  std::uniform_real_distribution<double> rdist(0.1, 2.0);
  for (int t = 0; t < 200; ++t) {
    const double y = dist(gen), z = dist(gen), r = rdist(gen);
    CHECK(gr_component(stable, y, z, r) ==
          Approx(gr_component(generic, y, z, r)).epsilon(1e-12));
    const GrPartials a = gr_partials(stable, y, z, r);
    const GrPartials b = gr_partials(generic, y, z, r);
    CHECK(a.d_yi == Approx(b.d_yi).margin(1e-12));
    CHECK(a.d_zi == Approx(b.d_zi).margin(1e-12));
    CHECK(a.d_r == Approx(b.d_r).margin(1e-10));
  }
  // Deep min(y,z)/r territory where the generic sum underflows: the stable
  // form must still return the exact smoothed min.
  CHECK(gr_component(stable, 900.0, 450.0, 1e-11) == Approx(450.0));
}

TEST_CASE("loja_ratio values") {
  CHECK(loja_ratio(make_theta2(), 5.0) == 5.0);
  CHECK(loja_ratio(make_theta1(), 3.0) == Approx(0.75));
  const double x = std::exp(10.0) - 1.0;
  CHECK(loja_ratio(make_log_counterexample(), x) ==
        Approx(0.09999546000702375));
  CHECK_THROWS_AS(loja_ratio(make_theta1(), 0.0), InvalidInput);
}

TEST_CASE("condition (ii) halving checks") {
  const std::vector<double> grid = geometric_grid(1.1, 1e6, 120);
  CHECK(check_condition_ii(make_theta2(), 2.0, 2.0, 1.0, grid));
  CHECK(check_condition_ii(make_theta1(), 2.0, 4.0, 1.0, grid));
  CHECK_FALSE(check_condition_ii(make_theta1(), 2.0, 2.0, 1.0, grid));
  const std::vector<double> big = geometric_grid(1e2, 1e9, 100);
  CHECK_FALSE(check_condition_ii(make_log_counterexample(), 2.0, 2.0, 10.0, big));
  CHECK_THROWS_AS(check_condition_ii(make_theta1(), 2.0, 2.0, 1.0, {}),
                  InvalidInput);
  CHECK_THROWS_AS(check_condition_ii(make_theta1(), 2.0, 2.0, 10.0, {5.0}),
                  InvalidInput);
}

TEST_CASE("legacy technical assumption equals condition (ii) with m=2, n=1/a") {
  const std::vector<double> grid = geometric_grid(1.1, 1e6, 120);
  CHECK(check_legacy_assumption(make_theta2(), 0.5, 1.0, grid));
  CHECK(check_legacy_assumption(make_theta1(), 0.25, 1.0, grid));
  const std::vector<double> deep = geometric_grid(11.0, 1e10, 150);
  CHECK_FALSE(check_legacy_assumption(make_log_counterexample(), 0.5, 10.0, deep));
  for (double a : {0.3, 0.5, 0.8}) {
    CHECK(check_legacy_assumption(make_theta2(), a, 1.0, grid) ==
          check_condition_ii(make_theta2(), 2.0, 1.0 / a, 1.0, grid));
  }
}

TEST_CASE("verdict battery: the theorem's equivalence holds numerically") {
  const std::vector<double> grid = geometric_grid(1.1, 1e9, 200);

  // theta2's psi underflows past x ~ 745 (the specified DomainError), so
  // its ratio tail is sampled below that.
  const LojaReport t2 = loja_verdict(make_theta2(), geometric_grid(1.1, 500.0, 200));
  CHECK(t2.verdict == LojaVerdict::SatisfiedI);
  REQUIRE(t2.condition_ii_witness.has_value());
  CHECK(t2.condition_ii_witness->m == 2.0);
  CHECK(t2.condition_ii_witness->n == 2.0);
  CHECK(t2.liminf_estimate > 20.0);  // ratio = x from the tail start on
  CHECK(loja_ratio(make_theta2(), 700.0) == 700.0);
  CHECK_THROWS_AS(loja_ratio(make_theta2(), 800.0), DomainError);

  const LojaReport t1 = loja_verdict(make_theta1(), grid);
  CHECK(t1.verdict == LojaVerdict::SatisfiedI);
  CHECK(t1.liminf_estimate >= 0.99);
  CHECK(t1.condition_ii_witness.has_value());

  const LojaReport ce = loja_verdict(make_log_counterexample(), grid);
  CHECK(ce.verdict == LojaVerdict::FailsBoth);
  CHECK_FALSE(ce.condition_ii_witness.has_value());

  // (i) <=> (ii) across the battery.
  for (const LojaReport* rep : {&t2, &t1, &ce}) {
    const bool sat_i = rep->verdict == LojaVerdict::SatisfiedI;
    CHECK(sat_i == rep->condition_ii_witness.has_value());
  }
}

TEST_CASE("verdict input validation") {
  const SmoothingFamily f = make_theta1();
  CHECK_THROWS_AS(loja_verdict(f, geometric_grid(1.1, 100.0, 10)),
                  InvalidInput);
  std::vector<double> bad = geometric_grid(1.1, 1e6, 60);
  bad[30] = bad[29];
  CHECK_THROWS_AS(loja_verdict(f, bad), InvalidInput);
  CHECK_THROWS_AS(geometric_grid(-1.0, 10.0, 50), InvalidInput);
}
