// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include <doctest.h>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fas/specfun.hpp"

using namespace fas::specfun;

namespace {

// Q1(a, b) as the upper tail of a noncentral chi-square with two degrees of
// freedom and noncentrality a^2, evaluated at b^2.
double q1_oracle(double a, double b) {
  if (a == 0.0) return std::exp(-b * b / 2.0);
  if (b == 0.0) return 1.0;
  const boost::math::non_central_chi_squared dist(2.0, a * a);
  return boost::math::cdf(boost::math::complement(dist, b * b));
}

// Q1(a, b) from the defining integral, 1 - int_0^b t e^{-(t^2+a^2)/2} I0(at) dt.
double q1_integral(double a, double b) {
  auto f = [a](double t) {
    return t * std::exp(-(t * t + a * a) / 2.0) * boost::math::cyl_bessel_i(0, a * t);
  };
  return 1.0 - boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, b, 15, 1e-14);
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("J0 and J1 against Boost") {
    double worst0 = 0.0, worst1 = 0.0;
    for (double x = 0.0; x <= 1.0e4; x += (x < 50.0 ? 0.0137 : 1.731)) {
      worst0 = std::max(worst0, std::abs(bessel_j0(x) - boost::math::cyl_bessel_j(0, x)));
      worst1 = std::max(worst1, std::abs(bessel_j1(x) - boost::math::cyl_bessel_j(1, x)));
    }
    CHECK(worst0 < 1e-12);
    CHECK(worst1 < 1e-12);
    CHECK(bessel_j0(-3.3) == doctest::Approx(bessel_j0(3.3)).epsilon(1e-15));
    CHECK(bessel_j1(-3.3) == doctest::Approx(-bessel_j1(3.3)).epsilon(1e-15));
  }

  TEST_CASE("J0 relative accuracy away from zeros") {
    double worst = 0.0;
    for (double x = 0.05; x <= 1.0e4; x *= 1.011) {
      const double ref = boost::math::cyl_bessel_j(0, x);
      if (std::abs(ref) < 1e-3) continue;
      worst = std::max(worst, std::abs(bessel_j0(x) - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("J0 reference values") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(std::abs(bessel_j0(2.0 * std::numbers::pi * 0.38)) < 0.02);
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-10);
    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(bessel_j0(std::nan("")), DomainError);
  }

  TEST_CASE("scaled I0") {
    CHECK(bessel_i0_scaled(0.0) == 1.0);
    CHECK(bessel_i0_scaled(1.0) == doctest::Approx(0.46576).epsilon(2e-5));
    double worst = 0.0;
    for (double x = 1e-3; x < 690.0; x *= 1.05) {
      const double ref = std::exp(-x) * boost::math::cyl_bessel_i(0, x);
      worst = std::max(worst, std::abs(bessel_i0_scaled(x) - ref) / ref);
    }
    CHECK(worst < 1e-13);
    const double big = bessel_i0_scaled(1e6);
    CHECK(big > 0.0);
    CHECK(big < 1e-3);
    CHECK(big == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * 1e6)).epsilon(1e-6));
    double previous = 1.0;
    for (double x = 0.01; x < 1e5; x *= 1.3) {
      const double v = bessel_i0_scaled(x);
      CHECK(v < previous);
      previous = v;
    }
    CHECK_THROWS_AS(bessel_i0_scaled(-1.0), DomainError);
  }

  TEST_CASE("Marcum Q1 special values") {
    CHECK(marcum_q1(3.7, 0.0) == 1.0);
    CHECK(marcum_q1(0.0, 1.0) == doctest::Approx(0.6065307).epsilon(1e-7));
    for (double v : {0.0, 0.3, 1.0, 5.0, 30.0}) {
      CHECK(marcum_q1(v, 0.0) == 1.0);
      CHECK(std::abs(marcum_q1(0.0, v) - std::exp(-v * v / 2.0)) <= 1e-15);
    }
    CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.732880).epsilon(1e-5));
    CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.5 * (1.0 + bessel_i0_scaled(1.0))).epsilon(1e-14));
    CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(q1_integral(1.0, 1.0)).epsilon(1e-12));
  }

  TEST_CASE("Marcum Q1 against the noncentral chi-square") {
    double worst = 0.0;
    for (double a = 0.0; a <= 50.0; a += 0.61) {
      for (double b = 0.0; b <= 50.0; b += 0.53) {
        worst = std::max(worst, std::abs(marcum_q1(a, b) - q1_oracle(a, b)));
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("Marcum Q1 against the defining integral") {
    double worst = 0.0;
    for (double a : {0.1, 0.7, 1.5, 3.0, 6.0, 11.0}) {
      for (double b : {0.2, 0.9, 2.0, 4.5, 8.0, 13.0}) {
        worst = std::max(worst, std::abs(marcum_q1(a, b) - q1_integral(a, b)));
      }
    }
    CHECK(worst < 1e-11);
  }

  TEST_CASE("Marcum Q1 relative accuracy in the tails") {
    for (double a : {0.5, 2.0, 5.0}) {
      for (double b : {12.0, 20.0, 30.0}) {
        const double ref = q1_oracle(a, b);
        if (!(ref > 1e-290)) continue;
        CHECK(marcum_q1(a, b) == doctest::Approx(ref).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("Marcum Q1 with large products a*b") {
    // Both branches around the switch, and deep into the integral branch.
    for (auto [a, b] : {std::pair{31.0, 32.0}, {32.0, 31.5}, {40.0, 38.0}, {60.0, 61.0}, {200.0, 199.0},
                        {500.0, 502.0}, {1000.0, 1000.0}}) {
      CHECK(marcum_q1(a, b) == doctest::Approx(q1_oracle(a, b)).epsilon(1e-9));
    }
    const double diag = 1000.0;
    CHECK(marcum_q1(diag, diag) == doctest::Approx(0.5 * (1.0 + bessel_i0_scaled(diag * diag))).epsilon(1e-12));
  }

  TEST_CASE("Marcum Q1 monotonicity on a 50 x 50 grid") {
    int violations = 0;
    for (int i = 0; i < 50; ++i) {
      const double a = 10.0 * i / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double b = 10.0 * j / 49.0;
        const double q = marcum_q1(a, b);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        if (j < 49 && marcum_q1(a, 10.0 * (j + 1) / 49.0) > q) ++violations;
        if (i < 49 && marcum_q1(10.0 * (i + 1) / 49.0, b) < q) ++violations;
      }
    }
    CHECK(violations == 0);
  }

  TEST_CASE("Q1 on the diagonal tends to one half") {
    double previous = 1.0;
    for (double a : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      const double gap = std::abs(marcum_q1(a, a) - 0.5);
      CHECK(gap < previous);
      CHECK(gap == doctest::Approx(0.5 * bessel_i0_scaled(a * a)).epsilon(1e-10));
      previous = gap;
    }
    // The gap is e^{-a^2} I0(a^2) / 2 ~ 1 / (2 a sqrt(2 pi)); it first drops
    // below 0.01 near a = 20.
    CHECK(std::abs(marcum_q1(16.0, 16.0) - 0.5) == doctest::Approx(0.012473).epsilon(1e-4));
    CHECK(std::abs(marcum_q1(20.0, 20.0) - 0.5) < 0.01);
  }

  TEST_CASE("MarcumArgs rejects bad input") {
    CHECK_THROWS_AS(MarcumArgs(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(MarcumArgs(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(MarcumArgs(std::numeric_limits<double>::infinity(), 1.0), DomainError);
    CHECK_THROWS_AS(marcum_q1(1.0, std::nan("")), DomainError);
    const MarcumArgs m(2.0, 3.0);
    CHECK(m.a() == 2.0);
    CHECK(m.b() == 3.0);
    CHECK(marcum_q1(m) == marcum_q1(2.0, 3.0));
  }

  TEST_CASE("delta Q1") {
    for (double x : {0.0, 0.4, 3.0, 40.0}) CHECK(delta_q1(x, x) == 0.0);
    const double ten = std::sqrt(2.0) * std::sqrt(10.0);
    CHECK(delta_q1(ten, 0.0) == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-13));
    const double d = delta_q1(2.0, 1.0);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    CHECK(d == doctest::Approx(q1_oracle(2.0, 1.0) - q1_oracle(1.0, 2.0)).epsilon(1e-11));
    for (double a = 0.0; a < 12.0; a += 0.7) {
      for (double b = 0.0; b < 12.0; b += 0.9) CHECK(delta_q1(a, b) == -delta_q1(b, a));
    }
  }

  TEST_CASE("Gaussian Q") {
    CHECK(gaussian_q(0.0) == 0.5);
    CHECK(gaussian_q(10.0) < 1e-20);
    CHECK(gaussian_q(1.0) == doctest::Approx(0.158655).epsilon(1e-6));
    const boost::math::normal n;
    for (double x = -8.0; x <= 8.0; x += 0.37) {
      CHECK(std::abs(gaussian_q(x) - boost::math::cdf(boost::math::complement(n, x))) < 1e-15);
    }
  }

  TEST_CASE("J0 envelope inverse") {
    CHECK(inv_besselj0_envelope(1.0).epsilon_star == 0.0);
    CHECK(inv_besselj0_envelope(1.5).epsilon_star == 0.0);
    CHECK_THROWS_AS(inv_besselj0_envelope(0.0), DomainError);
    CHECK_THROWS_AS(inv_besselj0_envelope(-0.2), DomainError);

    // 0.403 sits just above the first negative lobe (|J0(3.8317)| = 0.40276),
    // so the answer is the crossing on the main lobe.
    const auto first = inv_besselj0_envelope(0.403);
    CHECK(first.achieved);
    CHECK(first.epsilon_star > 1.0);
    CHECK(first.epsilon_star < 2.404825557695773);
    CHECK(std::abs(bessel_j0(first.epsilon_star)) == doctest::Approx(0.403).epsilon(1e-9));

    // Dense-scan oracle: last point where |J0| exceeds the target.
    for (double target : {0.9, 0.5, 0.403, 0.4, 0.3, 0.2, 0.1, 0.05}) {
      const auto r = inv_besselj0_envelope(target);
      REQUIRE(r.achieved);
      double last_above = 0.0;
      for (double e = 0.0; e < 400.0; e += 1e-4) {
        if (std::abs(bessel_j0(e)) > target) last_above = e;
      }
      CHECK(r.epsilon_star == doctest::Approx(last_above).epsilon(2e-4));
      double excess = 0.0;
      for (double e = r.epsilon_star; e <= r.epsilon_star + 200.0; e += 1e-3) {
        excess = std::max(excess, std::abs(bessel_j0(e)) - target);
      }
      CHECK(excess <= 1e-9);
    }
  }

  TEST_CASE("J0 envelope inverse is monotone in the target") {
    double previous = 0.0;
    for (double target = 0.99; target > 0.01; target *= 0.93) {
      const auto r = inv_besselj0_envelope(target);
      REQUIRE(r.achieved);
      CHECK(r.epsilon_star >= previous);
      previous = r.epsilon_star;
    }
  }

  TEST_CASE("J0 envelope inverse for small targets") {
    const auto r = inv_besselj0_envelope(1e-3);
    REQUIRE(r.achieved);
    // |J0| ~ sqrt(2 / (pi e)) puts the answer near 6.4e5.
    CHECK(r.epsilon_star > 6.0e5);
    CHECK(r.epsilon_star < 6.8e5);
    CHECK(std::abs(bessel_j0(r.epsilon_star)) == doctest::Approx(1e-3).epsilon(1e-6));
  }
}
