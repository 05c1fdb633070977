// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/analytic.hpp"

#include <cmath>
#include <vector>

#include "fas/specfun.hpp"

namespace fas {

namespace {

bool degenerate(double mu) { return std::abs(mu) > kDegenerateMu; }

// Marcum arguments of the factor for port k at per-port threshold r:
// Q1(a sqrt(t), b) with a = sqrt(2 mu^2 / (1 - mu^2)), b = sqrt(2 / (1 - mu^2)) r.
struct PortTerm {
  double a;
  double b;
};

PortTerm port_term(double mu, double r) {
  const double s = 1.0 - mu * mu;
  return {std::sqrt(2.0 * mu * mu / s), std::sqrt(2.0 / s) * r};
}

double product_of_misses(const std::vector<PortTerm>& ports, double t) {
  const double root_t = std::sqrt(t);
  double prod = 1.0;
  for (const PortTerm& p : ports) {
    prod *= 1.0 - specfun::marcum_q1(p.a * root_t, p.b);
    if (prod == 0.0) break;
  }
  return prod;
}

void check_radii(const CorrelationProfile& profile, std::span<const double> r) {
  if (r.size() != profile.size()) {
    throw std::invalid_argument("need one radius per port");
  }
  for (double v : r) {
    if (!(v >= 0.0)) throw std::invalid_argument("radii must be nonnegative");
  }
}

double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace

double joint_pdf(const CorrelationProfile& profile, std::span<const double> r) {
  profile.validate();
  check_radii(profile, r);
  const double r1 = r[0];
  double density = 2.0 * r1 * std::exp(-r1 * r1);
  for (std::size_t k = 1; k < profile.size(); ++k) {
    const double mu = profile.mu[k];
    if (std::abs(mu) >= 1.0) throw SingularProfileError("joint_pdf: |mu_k| = 1 has no density");
    const double s = 1.0 - mu * mu;
    const double rk = r[k];
    const double z = 2.0 * std::abs(mu) * r1 * rk / s;
    // exp(-(rk^2 + mu^2 r1^2)/s) I0(z) = exp(-(rk - |mu| r1)^2 / s) e^{-z} I0(z)
    const double gap = rk - std::abs(mu) * r1;
    density *= 2.0 * rk / s * std::exp(-gap * gap / s) * specfun::bessel_i0_scaled(z);
  }
  return density;
}

double joint_cdf(const CorrelationProfile& profile, std::span<const double> r,
                 const QuadratureSettings& q) {
  profile.validate();
  check_radii(profile, r);
  q.validate();
  double r1 = r[0];
  std::vector<PortTerm> ports;
  for (std::size_t k = 1; k < profile.size(); ++k) {
    // A copy of port 1 only tightens the limit on |g_1|.
    if (degenerate(profile.mu[k])) {
      r1 = std::min(r1, r[k]);
    } else {
      ports.push_back(port_term(profile.mu[k], r[k]));
    }
  }
  const double upper = r1 * r1;
  if (ports.empty()) return one_minus_exp_neg(upper);
  auto integrand = [&](double t) { return std::exp(-t) * product_of_misses(ports, t); };
  return integrate(integrand, 0.0, upper, q).value;
}

double joint_cdf_n2(double mu2, double r1, double r2) {
  if (!(std::abs(mu2) < 1.0)) throw SingularProfileError("joint_cdf_n2: |mu2| must be < 1");
  const double s = 1.0 - mu2 * mu2;
  const double wide = std::sqrt(2.0 / s);
  const double narrow = std::sqrt(2.0 * mu2 * mu2 / s);
  return 1.0 - std::exp(-r2 * r2) * specfun::marcum_q1(wide * r1, narrow * r2) -
         std::exp(-r1 * r1) * (1.0 - specfun::marcum_q1(narrow * r1, wide * r2));
}

double outage_exact(const CorrelationProfile& profile, double snr_ratio, const QuadratureSettings& q) {
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const std::vector<double> r(profile.size(), std::sqrt(snr_ratio));
  return joint_cdf(profile, r, q);
}

double outage_exact(const FasConfig& config, const QuadratureSettings& q) {
  config.validate();
  return outage_exact(correlation_profile(config), config.snr_ratio, q);
}

double outage_n2_closed_form(double mu2, double snr_ratio) {
  if (!(std::abs(mu2) < 1.0)) throw SingularProfileError("outage_n2_closed_form: |mu2| must be < 1");
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const double x = snr_ratio;
  if (degenerate(mu2)) return one_minus_exp_neg(x);
  const double s = 1.0 - mu2 * mu2;
  return one_minus_exp_neg(x) -
         std::exp(-x) * specfun::delta_q1(std::sqrt(2.0 * x / s), std::sqrt(2.0 * mu2 * mu2 * x / s));
}

double outage_approx(const CorrelationProfile& profile, double snr_ratio) {
  profile.validate();
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const double x = snr_ratio;
  double gain = 0.0;
  for (std::size_t k = 1; k < profile.size(); ++k) {
    const double mu = profile.mu[k];
    if (degenerate(mu)) continue;
    const double s = 1.0 - mu * mu;
    gain += specfun::delta_q1(std::sqrt(2.0 * x / s), std::sqrt(2.0 * mu * mu * x / s));
  }
  return one_minus_exp_neg(x) - std::exp(-x) * gain;
}

double outage_approx(const FasConfig& config) {
  config.validate();
  return outage_approx(correlation_profile(config), config.snr_ratio);
}

double outage_port_reduction(const CorrelationProfile& profile, double snr_ratio,
                             const QuadratureSettings& q) {
  profile.validate();
  q.validate();
  if (profile.size() < 2) throw std::invalid_argument("port reduction needs at least two ports");
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const double last_mu = profile.mu.back();
  if (degenerate(last_mu)) return 0.0;
  const double r = std::sqrt(snr_ratio);
  const PortTerm last = port_term(last_mu, r);
  std::vector<PortTerm> others;
  for (std::size_t k = 1; k + 1 < profile.size(); ++k) {
    if (!degenerate(profile.mu[k])) others.push_back(port_term(profile.mu[k], r));
  }
  auto integrand = [&](double t) {
    const double hit = specfun::marcum_q1(last.a * std::sqrt(t), last.b);
    if (hit == 0.0) return 0.0;
    return std::exp(-t) * hit * product_of_misses(others, t);
  };
  return integrate(integrand, 0.0, snr_ratio, q).value;
}

double outage_port_reduction(const FasConfig& config, const QuadratureSettings& q) {
  config.validate();
  return outage_port_reduction(correlation_profile(config), config.snr_ratio, q);
}

double outage_mrc(int branches, double snr_ratio) {
  if (branches < 1) throw std::invalid_argument("MRC needs at least one branch");
  if (!(snr_ratio >= 0.0)) throw std::invalid_argument("snr_ratio must be nonnegative");
  const double x = snr_ratio;
  if (x == 0.0) return 0.0;
  if (x < branches) {
    // Tail form e^{-x} sum_{k>=L} x^k / k! keeps full relative accuracy at small x.
    double term = std::exp(branches * std::log(x) - std::lgamma(branches + 1.0) - x);
    double sum = term;
    for (int k = branches + 1; k < branches + 500; ++k) {
      term *= x / k;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::min(1.0, sum);
  }
  double term = 1.0, partial = 1.0;
  for (int k = 1; k < branches; ++k) {
    term *= x / k;
    partial += term;
  }
  return std::max(0.0, 1.0 - std::exp(-x) * partial);
}

std::optional<int> mrc_crossing(double size_wavelengths, double snr_ratio, int branches, int n_max,
                                const QuadratureSettings& q) {
  const double level = outage_mrc(branches, snr_ratio);
  for (int n = 1; n <= n_max; ++n) {
    if (outage_exact(FasConfig{n, size_wavelengths, snr_ratio}, q) < level) return n;
  }
  return std::nullopt;
}

}  // namespace fas
