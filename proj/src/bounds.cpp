// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/bounds.hpp"

#include <cmath>
#include <numbers>

#include "fas/analytic.hpp"

namespace fas {

BoundConstants bound_constants(double kappa) {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw ConstantsError("kappa must be > 1");
  constexpr double pi = std::numbers::pi;
  const double u = kappa - 1.0;
  const double rho =
      std::exp(1.0 / (pi * u + 2.0)) / (2.0 * kappa) * std::sqrt(u * (pi * u + 2.0) / pi);
  if (!(rho > 0.0 && rho < 0.5)) throw ConstantsError("rho fell outside (0, 0.5)");
  return {kappa, rho};
}

double reduced_port_bound_factor(double mu_k, double snr_ratio, const BoundConstants& c) {
  if (!(std::abs(mu_k) < 1.0)) throw std::domain_error("bound factor needs |mu_k| < 1");
  return 1.0 - c.rho * std::exp(-c.kappa * snr_ratio / (1.0 - mu_k * mu_k));
}

double per_port_bound_factor(double mu_k, double snr_ratio, const BoundConstants& c) {
  if (!(std::abs(mu_k) < 1.0)) throw std::domain_error("bound factor needs |mu_k| < 1");
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const double m = std::abs(mu_k);
  if (m == 0.0 || c.rho / std::sqrt(m) >= 1.0) return reduced_port_bound_factor(mu_k, snr_ratio, c);
  return 1.0 - c.rho / std::sqrt(m) * std::exp(-c.kappa * snr_ratio / (1.0 - mu_k * mu_k));
}

double outage_upper_bound(const CorrelationProfile& profile, double snr_ratio,
                          const BoundConstants& c) {
  profile.validate();
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  double bound = -std::expm1(-snr_ratio);
  for (std::size_t k = 1; k < profile.size(); ++k) {
    if (std::abs(profile.mu[k]) > kDegenerateMu) continue;
    bound *= per_port_bound_factor(profile.mu[k], snr_ratio, c);
  }
  return bound;
}

double outage_upper_bound(const FasConfig& config, const BoundConstants& c) {
  config.validate();
  return outage_upper_bound(correlation_profile(config), config.snr_ratio, c);
}

KappaSearch optimize_kappa(const FasConfig& config, double kappa_max) {
  if (!(kappa_max > 1.0)) throw ConstantsError("kappa_max must be > 1");
  const CorrelationProfile profile = correlation_profile(config);
  auto eval = [&](double kappa) { return outage_upper_bound(profile, config.snr_ratio, bound_constants(kappa)); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1.0 + 1e-9, hi = kappa_max;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-8; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
  }
  KappaSearch best{bound_constants(0.5 * (lo + hi)), 0.0};
  best.bound = eval(best.constants.kappa);
  // Golden section assumes unimodality; never return worse than an endpoint.
  const double at_max = eval(kappa_max);
  if (at_max < best.bound) best = {bound_constants(kappa_max), at_max};
  return best;
}

}  // namespace fas
