// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <stdexcept>

#include "fas/channel.hpp"

namespace fas {

class ConstantsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Constants of the Marcum-Q lower bound
///   Q1(a, b) >~ rho sqrt(b/a) exp(-kappa (b - a)^2 / 2),  kappa > 1,
/// with rho = e^{1/(pi(kappa-1)+2)} / (2 kappa) sqrt((kappa-1)(pi(kappa-1)+2)/pi).
struct BoundConstants {
  double kappa = 2.0;
  double rho = 0.0;
};

inline constexpr double kDefaultKappa = 2.0;

BoundConstants bound_constants(double kappa = kDefaultKappa);

/// 1 - (rho / sqrt|mu|) e^{-kappa x / (1 - mu^2)}, falling back to
/// 1 - rho e^{-kappa x / (1 - mu^2)} when mu = 0 or rho / sqrt|mu| >= 1.
/// Always in (0, 1].
double per_port_bound_factor(double mu_k, double snr_ratio, const BoundConstants& c);

/// The fallback form 1 - rho e^{-kappa x / (1 - mu^2)} on its own. This is
/// the factor the closed-form design rules invert.
double reduced_port_bound_factor(double mu_k, double snr_ratio, const BoundConstants& c);

/// (1 - e^{-x}) prod_{k>=2} factor_k, skipping ports that duplicate port 1.
double outage_upper_bound(const CorrelationProfile& profile, double snr_ratio,
                          const BoundConstants& c);
double outage_upper_bound(const FasConfig& config, const BoundConstants& c);

struct KappaSearch {
  BoundConstants constants;
  double bound = 1.0;
};

/// Golden-section search for the kappa in (1, kappa_max] giving the smallest
/// bound for this configuration.
KappaSearch optimize_kappa(const FasConfig& config, double kappa_max = 10.0);

}  // namespace fas
