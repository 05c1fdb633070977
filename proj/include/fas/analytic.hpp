// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "fas/channel.hpp"
#include "fas/quadrature.hpp"

namespace fas {

/// A profile with a port at |mu| = 1 has no joint density.
class SingularProfileError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ports with |mu_k| above this are treated as copies of port 1 and dropped
/// before integration; their contribution to the outage is exactly zero.
inline constexpr double kDegenerateMu = 1.0 - 1.0e-9;

struct OutageReport {
  double exact = 0.0;
  double approx = 0.0;
  std::optional<double> upper_bound;
  std::optional<double> mc_estimate;
  std::optional<double> mc_half_width_95;
};

/// Joint density of |g_1|, ..., |g_N| (sigma = 1). Requires |mu_k| < 1.
double joint_pdf(const CorrelationProfile& profile, std::span<const double> r);

/// Joint cdf P(|g_1| < r_1, ..., |g_N| < r_N) as one integral over
/// t in [0, r_1^2] of e^{-t} prod_k [1 - Q1(sqrt(2 mu_k^2 t/(1-mu_k^2)), sqrt(2/(1-mu_k^2)) r_k)].
double joint_cdf(const CorrelationProfile& profile, std::span<const double> r,
                 const QuadratureSettings& q = {});

/// Closed-form joint cdf of two ports.
double joint_cdf_n2(double mu2, double r1, double r2);

/// Exact outage probability for an arbitrary profile at threshold
/// x = gamma_th / Gamma.
double outage_exact(const CorrelationProfile& profile, double snr_ratio,
                    const QuadratureSettings& q = {});
/// Same, with the profile derived from (N, W).
double outage_exact(const FasConfig& config, const QuadratureSettings& q = {});

/// Two-port outage in closed form.
double outage_n2_closed_form(double mu2, double snr_ratio);

/// First-order closed-form approximation. Not clamped: it goes negative once
/// many weakly correlated ports are summed.
double outage_approx(const CorrelationProfile& profile, double snr_ratio);
double outage_approx(const FasConfig& config);

/// Outage reduction contributed by the last port of the profile:
/// p_out(N-1 ports) - p_out(N ports).
double outage_port_reduction(const CorrelationProfile& profile, double snr_ratio,
                             const QuadratureSettings& q = {});
double outage_port_reduction(const FasConfig& config, const QuadratureSettings& q = {});

/// L-branch MRC over independent Rayleigh branches:
/// 1 - e^{-x} sum_{k<L} x^k / k!.
double outage_mrc(int branches, double snr_ratio);

/// Smallest N <= n_max whose exact outage over a size-W layout falls below
/// the L-branch MRC outage.
std::optional<int> mrc_crossing(double size_wavelengths, double snr_ratio, int branches, int n_max,
                                const QuadratureSettings& q = {});

}  // namespace fas
