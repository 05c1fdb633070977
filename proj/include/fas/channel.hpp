// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "fas/rng.hpp"

namespace fas {

/// Raised when a configuration violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double db_to_linear(double db);
double linear_to_db(double ratio);

/// One fluid-antenna experiment: N ports spread evenly over a line of
/// size_wavelengths * lambda, and the outage threshold relative to the mean
/// SNR (gamma_th / Gamma, linear).
struct FasConfig {
  int n_ports = 1;
  double size_wavelengths = 1.0;
  double snr_ratio = 1.0;

  static FasConfig with_snr_db(int n_ports, double size_wavelengths, double snr_db) {
    return {n_ports, size_wavelengths, db_to_linear(snr_db)};
  }
  void validate() const;
};

/// Average received SNR Gamma = sigma^2 * Theta.
struct AvgSnr {
  double theta = 1.0;
  double sigma_sq = 1.0;

  double gamma() const;
};

/// Correlation of every port with port 1. mu[0] is port 1 and is always 0;
/// displacements are in wavelengths.
struct CorrelationProfile {
  std::vector<double> mu;
  std::vector<double> displacements;

  std::size_t size() const { return mu.size(); }
  void validate() const;
  /// First n ports of this profile.
  CorrelationProfile prefix(std::size_t n) const;
  /// Copy with one more port of the given correlation at displacement d.
  CorrelationProfile with_port(double mu_k, double d) const;
};

std::vector<double> port_displacements(const FasConfig& config);

/// mu_k = J0(2 pi (k-1) W / (N-1)), the isotropic-scattering correlation of
/// port k with port 1.
CorrelationProfile correlation_profile(const FasConfig& config);

/// N ports that all share the same correlation with port 1 (port 1 itself
/// keeps mu = 0). Displacements are left evenly spaced over unit length.
CorrelationProfile homogeneous_profile(int n_ports, double mu);

/// N mutually independent ports.
CorrelationProfile independent_profile(int n_ports);

struct ChannelDraw {
  std::vector<std::complex<double>> gains;
  std::complex<double> common_part;
};

/// One realisation of the port gains with sigma = 1:
///   g_1 = x0 + j y0,
///   g_k = (sqrt(1 - mu_k^2) x_k + mu_k x0) + j (sqrt(1 - mu_k^2) y_k + mu_k y0),
/// with x_i, y_i independent N(0, 1/2).
ChannelDraw draw_channels(const CorrelationProfile& profile, RandomStream& rng);

/// The generator ties every port to port 1 only, so ports k, l >= 2 have
/// correlation mu_k mu_l rather than J0 of their separation. This reports the
/// largest gap between the two.
struct CorrelationDiscrepancy {
  double max_abs_error = 0.0;
  int port_k = 0;
  int port_l = 0;
  double model = 0.0;
  double isotropic = 0.0;
};
CorrelationDiscrepancy correlation_discrepancy(const FasConfig& config);

struct DopplerTraceConfig {
  double speed_mps = 30.0 / 3.6;
  double carrier_hz = 5.0e9;
  double duration_s = 1.0;
  double sample_rate_hz = 1.0e4;
  int n_scatterers = 64;
  int mrc_branches = 2;

  double wavelength_m() const;
  double max_doppler_hz() const;
  std::size_t samples() const;
  void validate() const;
};

struct EnvelopeTrace {
  std::vector<double> t_norm;                // v t / lambda
  std::vector<std::vector<double>> port_db;  // [sample][port], 20 log10 |g_k|
  std::vector<double> fas_db;                // best port per sample
  std::vector<double> mrc_db;                // sqrt(sum |h_i|^2) over MRC branches

  void write_csv(std::ostream& out) const;
};

/// Time-varying port envelopes. Every underlying Gaussian process is a
/// sum of sinusoids with random arrival angles and phases, whose
/// autocorrelation tends to (1/2) J0(2 pi f_m tau); the spatial mixing above
/// is applied per time sample.
EnvelopeTrace envelope_trace(const FasConfig& config, const DopplerTraceConfig& doppler,
                             RandomStream& rng);

struct TraceStatistics {
  double spread_fraction = 0.0;  // share of samples with max - min port envelope >= spread_db
  double fas_variance_db = 0.0;
  double min_port_variance_db = 0.0;
  double max_spread_db = 0.0;
};

TraceStatistics trace_statistics(const EnvelopeTrace& trace, double spread_db = 30.0);

}  // namespace fas
