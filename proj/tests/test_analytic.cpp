// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "fas/analytic.hpp"
#include "fas/mc.hpp"

using namespace fas;

namespace {

// Two-port joint density written out directly with an unscaled I0.
double pdf2_direct(double mu, double r1, double r2) {
  const double s = 1.0 - mu * mu;
  return 4.0 * r1 * r2 / s * std::exp(-(r1 * r1 + r2 * r2) / s) *
         boost::math::cyl_bessel_i(0, 2.0 * std::abs(mu) * r1 * r2 / s);
}

// P(|g1| < r1, |g2| < r2) by nested Gauss-Kronrod over the direct density.
double cdf2_oracle(double mu, double r1, double r2) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto outer = [&](double a) {
    auto inner = [&](double b) { return pdf2_direct(mu, a, b); };
    return GK::integrate(inner, 0.0, r2, 12, 1e-13);
  };
  return GK::integrate(outer, 0.0, r1, 12, 1e-13);
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("joint pdf reference values") {
    const double one[] = {1.0};
    CHECK(joint_pdf({{0.0}, {0.0}}, one) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
    const double r11[] = {1.0, 1.0};
    CHECK(joint_pdf(independent_profile(2), r11) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-15));
    const double r[] = {0.8, 1.2};
    CHECK(std::abs(joint_pdf({{0.0, 0.5}, {0.0, 1.0}}, r) - pdf2_direct(0.5, 0.8, 1.2)) < 1e-12);
    CHECK(joint_pdf({{0.0, -0.5}, {0.0, 1.0}}, r) == doctest::Approx(pdf2_direct(0.5, 0.8, 1.2)).epsilon(1e-14));
  }

  TEST_CASE("joint pdf stays finite where I0 overflows") {
    const double r[] = {30.0, 30.0};
    const double v = joint_pdf({{0.0, 0.999}, {0.0, 1.0}}, r);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }

  TEST_CASE("joint pdf errors") {
    const double r[] = {1.0, 1.0};
    const CorrelationProfile singular{{0.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(joint_pdf(singular, r), SingularProfileError);
    const double short_r[] = {1.0};
    CHECK_THROWS_AS(joint_pdf(independent_profile(2), short_r), std::invalid_argument);
    const double neg[] = {1.0, -1.0};
    CHECK_THROWS_AS(joint_pdf(independent_profile(2), neg), std::invalid_argument);
  }

  TEST_CASE("joint cdf") {
    const double far[] = {40.0, 40.0};
    CHECK(joint_cdf({{0.0, 0.7}, {0.0, 1.0}}, far) == doctest::Approx(1.0).epsilon(1e-9));
    const double r3[] = {1.0, 1.0, 1.0};
    CHECK(std::abs(joint_cdf(independent_profile(3), r3) - std::pow(1.0 - std::exp(-1.0), 3)) < 1e-9);
    const double r[] = {1.0, 1.3};
    const CorrelationProfile p{{0.0, 0.6}, {0.0, 1.0}};
    CHECK(std::abs(joint_cdf(p, r) - joint_cdf_n2(0.6, 1.0, 1.3)) < 1e-8);
  }

  TEST_CASE("joint cdf against nested quadrature of the density") {
    for (double mu : {-0.3, 0.2, 0.6, 0.95}) {
      for (auto [r1, r2] : {std::pair{0.5, 0.7}, {1.0, 1.3}, {1.6, 0.9}, {2.2, 2.5}}) {
        const double r[] = {r1, r2};
        const double oracle = cdf2_oracle(mu, r1, r2);
        CHECK(std::abs(joint_cdf({{0.0, mu}, {0.0, 1.0}}, r) - oracle) < 1e-9);
        CHECK(std::abs(joint_cdf_n2(mu, r1, r2) - oracle) < 1e-9);
      }
    }
    CHECK_THROWS_AS(joint_cdf_n2(1.0, 1.0, 1.0), SingularProfileError);
  }

  TEST_CASE("degenerate port tightens the limit on port 1") {
    const CorrelationProfile p{{0.0, 1.0}, {0.0, 0.0}};
    const double r[] = {2.0, 1.0};
    CHECK(joint_cdf(p, r) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  }

  TEST_CASE("exact outage special cases") {
    for (double x : {0.1, 1.0, 10.0}) {
      CHECK(outage_exact(FasConfig{1, 1.0, x}) == doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
      for (int n : {2, 4, 9}) {
        CHECK(std::abs(outage_exact(independent_profile(n), x) - std::pow(-std::expm1(-x), n)) < 1e-9);
      }
    }
    CHECK(outage_exact(FasConfig{7, 0.2, 1.0}) < 0.264241);
    CHECK_THROWS(outage_exact(independent_profile(2), 0.0));
  }

  TEST_CASE("exact outage for N = 2 equals the closed form") {
    for (double mu : {-0.4, 0.0, 0.3, 0.9, 0.99}) {
      for (double x : {0.1, 1.0, 10.0}) {
        const CorrelationProfile p{{0.0, mu}, {0.0, 1.0}};
        CHECK(std::abs(outage_exact(p, x) - outage_n2_closed_form(mu, x)) < 1e-8);
      }
    }
  }

  TEST_CASE("N = 2 at mu = 0.9 against Monte-Carlo") {
    const CorrelationProfile p{{0.0, 0.9}, {0.0, 1.0}};
    const McEstimate m = mc_outage_fas(p, 1.0, McSettings{10'000'000, 17, 1});
    CHECK(m.agrees_with(outage_n2_closed_form(0.9, 1.0)));
  }

  TEST_CASE("two-port closed form limits") {
    for (double x : {0.1, 1.0, 5.0}) {
      CHECK(outage_n2_closed_form(0.0, x) == doctest::Approx(std::pow(-std::expm1(-x), 2)).epsilon(1e-13));
      CHECK(outage_n2_closed_form(1.0 - 1e-12, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-12));
      CHECK(outage_n2_closed_form(0.999999, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-2));
      CHECK(outage_n2_closed_form(-0.6, x) == outage_n2_closed_form(0.6, x));
    }
    const double v = outage_n2_closed_form(0.5, 1.0);
    CHECK(v > std::pow(1.0 - std::exp(-1.0), 2));
    CHECK(v < 1.0 - std::exp(-1.0));
    const McEstimate m = mc_outage_fas({{0.0, 0.5}, {0.0, 1.0}}, 1.0, McSettings{10'000'000, 23, 1});
    CHECK(m.agrees_with(v));
    CHECK_THROWS_AS(outage_n2_closed_form(1.0, 1.0), SingularProfileError);
  }

  TEST_CASE("approximation") {
    for (double x : {0.1, 1.0, 10.0}) {
      CHECK(outage_approx(FasConfig{1, 1.0, x}) == doctest::Approx(-std::expm1(-x)).epsilon(1e-15));
      for (double w : {0.1, 0.3, 2.0}) {
        const FasConfig c{2, w, x};
        CHECK(std::abs(outage_approx(c) - outage_n2_closed_form(correlation_profile(c).mu[1], x)) < 1e-12);
      }
    }
    const FasConfig tight{10, 0.05, 10.0};
    CHECK(outage_approx(tight) == doctest::Approx(outage_exact(tight)).epsilon(0.1));
    // Many weakly correlated terms push the first-order sum below zero.
    CHECK(outage_approx(FasConfig{20, 5.0, 1.0}) < 0.0);
  }

  TEST_CASE("per-port reduction telescopes") {
    for (const FasConfig& c : {FasConfig{3, 0.5, 1.0}, FasConfig{6, 1.0, 0.3}, FasConfig{12, 3.0, 3.0}}) {
      const CorrelationProfile p = correlation_profile(c);
      const double reduction = outage_port_reduction(p, c.snr_ratio);
      const double shorter = outage_exact(p.prefix(p.size() - 1), c.snr_ratio);
      CHECK(reduction >= 0.0);
      CHECK(std::abs(outage_exact(p, c.snr_ratio) + reduction - shorter) < 1e-8);
    }
    CHECK(outage_port_reduction(FasConfig{3, 0.5, 1.0}) > 0.0);
    const CorrelationProfile dup = correlation_profile({3, 0.5, 1.0}).with_port(1.0, 0.5);
    CHECK(outage_port_reduction(dup, 1.0) == 0.0);
    const FasConfig single{1, 1.0, 1.0};
    CHECK_THROWS(outage_port_reduction(single));
  }

  TEST_CASE("MRC outage") {
    CHECK(outage_mrc(1, 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(outage_mrc(2, 1.0) == doctest::Approx(0.264241).epsilon(1e-6));
    CHECK(outage_mrc(5, 1.0) == doctest::Approx(3.6599e-3).epsilon(1e-4));
    CHECK(outage_mrc(8, 1.0) == doctest::Approx(1.02e-5).epsilon(0.01));
    for (int l = 1; l <= 12; ++l) {
      for (double x : {1e-4, 0.01, 0.3, 1.0, 4.0, 20.0}) {
        const double ref = boost::math::gamma_p(static_cast<double>(l), x);
        CHECK(outage_mrc(l, x) == doctest::Approx(ref).epsilon(1e-13));
      }
    }
    // Diversity order L: slope of the log-log curve at small x.
    for (int l : {1, 2, 3}) {
      const double slope = std::log(outage_mrc(l, 1e-3) / outage_mrc(l, 1e-4)) / std::log(10.0);
      CHECK(slope == doctest::Approx(l).epsilon(1e-3));
    }
    CHECK(outage_mrc(3, 0.0) == 0.0);
    CHECK_THROWS(outage_mrc(0, 1.0));
  }

  TEST_CASE("outage falls with N at fixed size") {
    double previous = 1.0;
    for (int n = 1; n <= 40; ++n) {
      const double v = outage_exact(FasConfig{n, 0.5, 1.0});
      CHECK(v <= previous + 1e-12);
      CHECK(v <= 1.0 - std::exp(-1.0) + 1e-15);
      CHECK(v >= 0.0);
      previous = v;
    }
  }

  TEST_CASE("degenerate port leaves the outage unchanged") {
    for (const FasConfig& c : {FasConfig{2, 0.5, 1.0}, FasConfig{5, 2.0, 0.1}}) {
      const CorrelationProfile p = correlation_profile(c);
      const CorrelationProfile q = p.with_port(1.0 - 1e-12, p.displacements.back());
      CHECK(std::abs(outage_exact(q, c.snr_ratio) - outage_exact(p, c.snr_ratio)) < 1e-6);
    }
  }

  TEST_CASE("crossing of the MRC level") {
    const auto n = mrc_crossing(0.2, 1.0, 2, 50);
    REQUIRE(n.has_value());
    CHECK(*n == 7);
    CHECK(!mrc_crossing(0.2, 1.0, 8, 20).has_value());
  }
}
