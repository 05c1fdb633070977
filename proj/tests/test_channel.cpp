// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fas/channel.hpp"
#include "fas/specfun.hpp"

using namespace fas;

namespace {

// Kolmogorov-Smirnov distance of a sample against Exp(1).
double ks_exponential(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = -std::expm1(-v[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("dB conversion") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(linear_to_db(db_to_linear(3.7)) == doctest::Approx(3.7).epsilon(1e-14));
    CHECK(FasConfig::with_snr_db(4, 1.0, 10.0).snr_ratio == doctest::Approx(10.0).epsilon(1e-15));
  }

  TEST_CASE("config validation") {
    const FasConfig good{1, 0.1, 1.0};
    const FasConfig no_ports{0, 1.0, 1.0};
    const FasConfig no_size{2, 0.0, 1.0};
    const FasConfig negative{2, 1.0, -1.0};
    const FasConfig nan_snr{2, 1.0, std::nan("")};
    CHECK_NOTHROW(good.validate());
    CHECK_THROWS_AS(no_ports.validate(), ConfigError);
    CHECK_THROWS_AS(no_size.validate(), ConfigError);
    CHECK_THROWS_AS(negative.validate(), ConfigError);
    CHECK_THROWS_AS(nan_snr.validate(), ConfigError);
    const AvgSnr snr{4.0, 0.5};
    const AvgSnr zero{0.0, 1.0};
    CHECK(snr.gamma() == 2.0);
    CHECK_THROWS_AS(zero.gamma(), ConfigError);
  }

  TEST_CASE("port layout and correlation profile") {
    const FasConfig c{5, 2.0, 1.0};
    const std::vector<double> d = port_displacements(c);
    REQUIRE(d.size() == 5);
    CHECK(d.front() == 0.0);
    CHECK(d.back() == 2.0);
    CHECK(d[2] == doctest::Approx(1.0).epsilon(1e-15));
    const CorrelationProfile p = correlation_profile(c);
    CHECK(p.mu[0] == 0.0);
    for (std::size_t k = 1; k < p.size(); ++k) {
      const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * 2.0 / 4.0;
      CHECK(p.mu[k] == doctest::Approx(boost::math::cyl_bessel_j(0, arg)).epsilon(1e-12));
    }
    const CorrelationProfile one = correlation_profile({1, 3.0, 1.0});
    CHECK(one.mu == std::vector<double>{0.0});
    CHECK(one.displacements == std::vector<double>{0.0});
  }

  TEST_CASE("profile helpers") {
    const CorrelationProfile h = homogeneous_profile(4, 0.3);
    CHECK(h.mu == std::vector<double>{0.0, 0.3, 0.3, 0.3});
    CHECK_NOTHROW(h.validate());
    CHECK(independent_profile(3).mu == std::vector<double>{0.0, 0.0, 0.0});
    const CorrelationProfile pre = h.prefix(2);
    CHECK(pre.size() == 2);
    CHECK_THROWS_AS(h.prefix(0), ConfigError);
    CHECK_THROWS_AS(h.prefix(5), ConfigError);
    const CorrelationProfile more = h.with_port(0.9, 0.5);
    CHECK(more.size() == 5);
    CHECK(more.mu.back() == 0.9);
    CHECK(more.displacements.back() >= h.displacements.back());
    CHECK_THROWS_AS(homogeneous_profile(0, 0.1), ConfigError);
    CHECK_THROWS_AS(homogeneous_profile(2, 1.5), ConfigError);
    CorrelationProfile bad{{0.1, 0.2}, {0.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {{0.0, 0.2}, {0.0}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {{0.0, 0.2, 0.1}, {0.0, 1.0, 0.5}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("port powers are unit-mean exponential") {
    const CorrelationProfile p = homogeneous_profile(3, 0.7);
    RandomStream rng(11, 0);
    constexpr int kDraws = 200000;
    std::vector<std::vector<double>> power(3, std::vector<double>(kDraws));
    for (int i = 0; i < kDraws; ++i) {
      const ChannelDraw d = draw_channels(p, rng);
      for (std::size_t k = 0; k < 3; ++k) power[k][static_cast<std::size_t>(i)] = std::norm(d.gains[k]);
    }
    // 1% critical value of the KS statistic.
    const double critical = 1.628 / std::sqrt(static_cast<double>(kDraws));
    for (const auto& v : power) CHECK(ks_exponential(v) < critical);
  }

  TEST_CASE("empirical correlation with port 1 matches mu") {
    const CorrelationProfile p{{0.0, 0.9, -0.4, 0.0}, {0.0, 0.1, 0.5, 1.0}};
    RandomStream rng(5, 3);
    constexpr int kDraws = 400000;
    std::vector<std::complex<double>> acc(p.size());
    for (int i = 0; i < kDraws; ++i) {
      const ChannelDraw d = draw_channels(p, rng);
      CHECK(d.common_part == d.gains[0]);
      for (std::size_t k = 0; k < p.size(); ++k) acc[k] += d.gains[k] * std::conj(d.gains[0]);
    }
    const double tol = 5.0 / std::sqrt(static_cast<double>(kDraws));
    for (std::size_t k = 1; k < p.size(); ++k) {
      const std::complex<double> rho = acc[k] / static_cast<double>(kDraws);
      CHECK(std::abs(rho.real() - p.mu[k]) < tol);
      CHECK(std::abs(rho.imag()) < tol);
    }
  }

  TEST_CASE("draws are reproducible per stream") {
    const CorrelationProfile p = correlation_profile({6, 1.0, 1.0});
    RandomStream a(99, 2), b(99, 2), c(99, 3);
    for (int i = 0; i < 100; ++i) {
      const ChannelDraw x = draw_channels(p, a);
      const ChannelDraw y = draw_channels(p, b);
      const ChannelDraw z = draw_channels(p, c);
      CHECK(x.gains == y.gains);
      CHECK(x.gains != z.gains);
    }
  }

  TEST_CASE("draws reject correlation above one") {
    const CorrelationProfile p{{0.0, 1.2}, {0.0, 1.0}};
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(draw_channels(p, rng), specfun::DomainError);
  }

  TEST_CASE("fully correlated port copies port 1") {
    const CorrelationProfile p{{0.0, 1.0}, {0.0, 0.0}};
    RandomStream rng(1, 0);
    const ChannelDraw d = draw_channels(p, rng);
    CHECK(d.gains[1] == d.gains[0]);
  }

  TEST_CASE("correlation discrepancy diagnostic") {
    CHECK(correlation_discrepancy({2, 1.0, 1.0}).max_abs_error == 0.0);
    const CorrelationDiscrepancy d = correlation_discrepancy({5, 0.5, 1.0});
    CHECK(d.max_abs_error > 0.05);
    CHECK(d.port_k >= 2);
    CHECK(d.port_l > d.port_k);
    CHECK(std::abs(d.model - d.isotropic) == doctest::Approx(d.max_abs_error));
  }

  TEST_CASE("Doppler trace configuration") {
    DopplerTraceConfig d;
    CHECK(d.wavelength_m() == doctest::Approx(0.0599584916).epsilon(1e-9));
    CHECK(d.max_doppler_hz() == doctest::Approx(138.9855).epsilon(1e-5));
    CHECK(d.samples() == 10000);
    CHECK_NOTHROW(d.validate());
    d.sample_rate_hz = 200.0;
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d = {};
    d.n_scatterers = 2;
    CHECK_THROWS_AS(d.validate(), ConfigError);
  }

  TEST_CASE("stationary terminal gives constant envelopes") {
    DopplerTraceConfig d;
    d.speed_mps = 0.0;
    d.duration_s = 0.01;
    RandomStream rng(3, 0);
    const EnvelopeTrace t = envelope_trace({4, 1.0, 1.0}, d, rng);
    REQUIRE(t.port_db.size() == 100);
    for (std::size_t i = 1; i < t.port_db.size(); ++i) {
      CHECK(t.port_db[i] == t.port_db[0]);
      CHECK(t.fas_db[i] == t.fas_db[0]);
      CHECK(t.mrc_db[i] == t.mrc_db[0]);
      CHECK(t.t_norm[i] == 0.0);
    }
  }

  TEST_CASE("trace shape, CSV and statistics") {
    DopplerTraceConfig d;
    d.duration_s = 0.2;
    RandomStream rng(8, 0);
    const EnvelopeTrace t = envelope_trace({10, 2.0, 1.0}, d, rng);
    REQUIRE(t.t_norm.size() == 2000);
    for (std::size_t i = 0; i < t.port_db.size(); ++i) {
      CHECK(t.fas_db[i] == *std::max_element(t.port_db[i].begin(), t.port_db[i].end()));
    }
    std::ostringstream os;
    t.write_csv(os);
    std::istringstream is(os.str());
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    CHECK(header.rfind("t_norm,port_1_db,port_2_db", 0) == 0);
    CHECK(header.find(",port_10_db,fas_db,mrc_db") != std::string::npos);
    CHECK(std::count(first.begin(), first.end(), ',') == 12);
    // Round trip of the last column.
    const double mrc = std::stod(first.substr(first.rfind(',') + 1));
    CHECK(mrc == t.mrc_db[0]);

    const TraceStatistics st = trace_statistics(t);
    CHECK(st.fas_variance_db < st.min_port_variance_db);
    CHECK(st.spread_fraction >= 0.0);
    CHECK(st.spread_fraction <= 1.0);
    CHECK(st.max_spread_db > 0.0);
  }

  TEST_CASE("sum-of-sinusoids power is unit mean") {
    DopplerTraceConfig d;
    d.duration_s = 1.0;
    double mean_power = 0.0;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomStream rng(seed, 0);
      const EnvelopeTrace t = envelope_trace({1, 1.0, 1.0}, d, rng);
      for (std::size_t i = 0; i < t.port_db.size(); i += 50) {
        mean_power += std::pow(10.0, t.port_db[i][0] / 10.0);
        ++n;
      }
    }
    CHECK(mean_power / n == doctest::Approx(1.0).epsilon(0.1));
  }
}
