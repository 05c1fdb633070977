// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/channel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "fas/specfun.hpp"

namespace fas {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

// One real Gaussian process with autocorrelation (1/2) J0(2 pi f_m tau),
// built from n equal-power sinusoids.
struct SinusoidProcess {
  std::vector<double> omega;
  std::vector<double> phase;
  double scale = 0.0;

  SinusoidProcess(double max_doppler_hz, int n, RandomStream& rng) : scale(1.0 / std::sqrt(n)) {
    omega.reserve(static_cast<std::size_t>(n));
    phase.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      omega.push_back(2.0 * std::numbers::pi * max_doppler_hz * std::cos(angle));
      phase.push_back(2.0 * std::numbers::pi * rng.uniform());
    }
  }

  double operator()(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) s += std::cos(omega[i] * t + phase[i]);
    return scale * s;
  }
};

double envelope_db(double re, double im) { return 10.0 * std::log10(re * re + im * im); }

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

void FasConfig::validate() const {
  if (n_ports < 1) throw ConfigError("n_ports must be >= 1");
  if (!(size_wavelengths > 0.0) || !std::isfinite(size_wavelengths)) {
    throw ConfigError("size_wavelengths must be positive and finite");
  }
  if (!(snr_ratio > 0.0) || !std::isfinite(snr_ratio)) {
    throw ConfigError("snr_ratio must be positive and finite");
  }
}

double AvgSnr::gamma() const {
  if (!(theta > 0.0) || !(sigma_sq > 0.0)) throw ConfigError("average SNR terms must be positive");
  return sigma_sq * theta;
}

void CorrelationProfile::validate() const {
  if (mu.empty()) throw ConfigError("correlation profile is empty");
  if (displacements.size() != mu.size()) {
    throw ConfigError("correlation profile needs one displacement per port");
  }
  if (mu.front() != 0.0) throw ConfigError("mu of the reference port must be 0");
  if (displacements.front() != 0.0) throw ConfigError("reference port displacement must be 0");
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (!(std::abs(mu[k]) <= 1.0)) throw ConfigError("|mu_k| must not exceed 1");
    if (!(displacements[k] >= 0.0)) throw ConfigError("displacements must be nonnegative");
    if (k > 0 && displacements[k] < displacements[k - 1]) {
      throw ConfigError("displacements must be nondecreasing");
    }
  }
}

CorrelationProfile CorrelationProfile::prefix(std::size_t n) const {
  if (n == 0 || n > mu.size()) throw ConfigError("profile prefix length out of range");
  return {std::vector<double>(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(displacements.begin(),
                              displacements.begin() + static_cast<std::ptrdiff_t>(n))};
}

CorrelationProfile CorrelationProfile::with_port(double mu_k, double d) const {
  CorrelationProfile out = *this;
  out.mu.push_back(mu_k);
  out.displacements.push_back(std::max(d, displacements.empty() ? 0.0 : displacements.back()));
  return out;
}

std::vector<double> port_displacements(const FasConfig& config) {
  config.validate();
  const int n = config.n_ports;
  if (n == 1) return {0.0};
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    d[static_cast<std::size_t>(k)] = k == n - 1 ? config.size_wavelengths
                                                : config.size_wavelengths * k / (n - 1);
  }
  return d;
}

CorrelationProfile correlation_profile(const FasConfig& config) {
  CorrelationProfile p;
  p.displacements = port_displacements(config);
  p.mu.resize(p.displacements.size(), 0.0);
  for (std::size_t k = 1; k < p.mu.size(); ++k) {
    p.mu[k] = specfun::bessel_j0(2.0 * std::numbers::pi * p.displacements[k]);
  }
  return p;
}

CorrelationProfile homogeneous_profile(int n_ports, double mu) {
  if (n_ports < 1) throw ConfigError("n_ports must be >= 1");
  if (!(std::abs(mu) <= 1.0)) throw ConfigError("|mu| must not exceed 1");
  CorrelationProfile p;
  p.mu.assign(static_cast<std::size_t>(n_ports), mu);
  p.mu[0] = 0.0;
  p.displacements = port_displacements({n_ports, 1.0, 1.0});
  return p;
}

CorrelationProfile independent_profile(int n_ports) { return homogeneous_profile(n_ports, 0.0); }

ChannelDraw draw_channels(const CorrelationProfile& profile, RandomStream& rng) {
  for (double m : profile.mu) {
    if (!(std::abs(m) <= 1.0)) throw specfun::DomainError("draw_channels: |mu_k| > 1");
  }
  ChannelDraw draw;
  const double x0 = rng.half_gaussian();
  const double y0 = rng.half_gaussian();
  draw.common_part = {x0, y0};
  draw.gains.reserve(profile.size());
  draw.gains.emplace_back(x0, y0);
  for (std::size_t k = 1; k < profile.size(); ++k) {
    const double m = profile.mu[k];
    const double s = std::sqrt(std::max(0.0, 1.0 - m * m));
    const double xk = rng.half_gaussian();
    const double yk = rng.half_gaussian();
    draw.gains.emplace_back(s * xk + m * x0, s * yk + m * y0);
  }
  return draw;
}

CorrelationDiscrepancy correlation_discrepancy(const FasConfig& config) {
  const CorrelationProfile p = correlation_profile(config);
  CorrelationDiscrepancy worst;
  for (std::size_t k = 1; k < p.size(); ++k) {
    for (std::size_t l = k + 1; l < p.size(); ++l) {
      const double model = p.mu[k] * p.mu[l];
      const double iso =
          specfun::bessel_j0(2.0 * std::numbers::pi * (p.displacements[l] - p.displacements[k]));
      if (std::abs(model - iso) > worst.max_abs_error) {
        worst = {std::abs(model - iso), static_cast<int>(k + 1), static_cast<int>(l + 1), model, iso};
      }
    }
  }
  return worst;
}

double DopplerTraceConfig::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

double DopplerTraceConfig::max_doppler_hz() const { return speed_mps / wavelength_m(); }

std::size_t DopplerTraceConfig::samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void DopplerTraceConfig::validate() const {
  if (!(speed_mps >= 0.0) || !(carrier_hz > 0.0) || !(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw ConfigError("trace needs speed >= 0 and positive carrier, duration and sample rate");
  }
  if (n_scatterers < 8) throw ConfigError("trace needs at least 8 scatterers per process");
  if (mrc_branches < 1) throw ConfigError("trace needs at least one MRC branch");
  if (!(sample_rate_hz > 2.0 * max_doppler_hz())) {
    throw ConfigError(fmt::format("sample rate {} Hz does not exceed twice the {} Hz Doppler",
                                  sample_rate_hz, max_doppler_hz()));
  }
  if (samples() == 0) throw ConfigError("trace has no samples");
}

EnvelopeTrace envelope_trace(const FasConfig& config, const DopplerTraceConfig& doppler,
                             RandomStream& rng) {
  config.validate();
  doppler.validate();
  const CorrelationProfile profile = correlation_profile(config);
  const double fm = doppler.max_doppler_hz();
  const int m = doppler.n_scatterers;

  std::vector<SinusoidProcess> re, im;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    re.emplace_back(fm, m, rng);
    im.emplace_back(fm, m, rng);
  }
  std::vector<SinusoidProcess> mrc_re, mrc_im;
  for (int b = 0; b < doppler.mrc_branches; ++b) {
    mrc_re.emplace_back(fm, m, rng);
    mrc_im.emplace_back(fm, m, rng);
  }

  EnvelopeTrace trace;
  const std::size_t n = doppler.samples();
  trace.t_norm.reserve(n);
  trace.port_db.reserve(n);
  trace.fas_db.reserve(n);
  trace.mrc_db.reserve(n);
  const double lambda = doppler.wavelength_m();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / doppler.sample_rate_hz;
    trace.t_norm.push_back(doppler.speed_mps * t / lambda);
    const double x0 = re[0](t);
    const double y0 = im[0](t);
    std::vector<double> row;
    row.reserve(profile.size());
    row.push_back(envelope_db(x0, y0));
    for (std::size_t k = 1; k < profile.size(); ++k) {
      const double mu = profile.mu[k];
      const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      row.push_back(envelope_db(s * re[k](t) + mu * x0, s * im[k](t) + mu * y0));
    }
    trace.fas_db.push_back(*std::max_element(row.begin(), row.end()));
    double power = 0.0;
    for (std::size_t b = 0; b < mrc_re.size(); ++b) {
      const double a = mrc_re[b](t), c = mrc_im[b](t);
      power += a * a + c * c;
    }
    trace.mrc_db.push_back(10.0 * std::log10(power));
    trace.port_db.push_back(std::move(row));
  }
  return trace;
}

namespace {

double variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

}  // namespace

TraceStatistics trace_statistics(const EnvelopeTrace& trace, double spread_db) {
  if (trace.port_db.empty()) throw ConfigError("trace is empty");
  TraceStatistics st;
  const std::size_t n = trace.port_db.size();
  const std::size_t ports = trace.port_db.front().size();
  std::size_t wide = 0;
  for (const auto& row : trace.port_db) {
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    const double spread = *hi - *lo;
    st.max_spread_db = std::max(st.max_spread_db, spread);
    if (spread >= spread_db) ++wide;
  }
  st.spread_fraction = static_cast<double>(wide) / static_cast<double>(n);
  st.fas_variance_db = variance(trace.fas_db);
  st.min_port_variance_db = std::numeric_limits<double>::infinity();
  std::vector<double> column(n);
  for (std::size_t k = 0; k < ports; ++k) {
    for (std::size_t i = 0; i < n; ++i) column[i] = trace.port_db[i][k];
    st.min_port_variance_db = std::min(st.min_port_variance_db, variance(column));
  }
  return st;
}

void EnvelopeTrace::write_csv(std::ostream& out) const {
  const std::size_t ports = port_db.empty() ? 0 : port_db.front().size();
  out << "t_norm";
  for (std::size_t k = 0; k < ports; ++k) out << ",port_" << (k + 1) << "_db";
  out << ",fas_db,mrc_db\n";
  for (std::size_t i = 0; i < t_norm.size(); ++i) {
    std::string line = fmt::format("{}", t_norm[i]);
    for (double v : port_db[i]) fmt::format_to(std::back_inserter(line), ",{}", v);
    fmt::format_to(std::back_inserter(line), ",{},{}\n", fas_db[i], mrc_db[i]);
    out << line;
  }
}

}  // namespace fas
