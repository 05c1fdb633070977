// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/design.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fas/analytic.hpp"
#include "fas/specfun.hpp"

namespace fas {

namespace {

// ln of the product of per-port factors for the (N, W) layout.
double log_factor_product(int n, double w, double x, const BoundConstants& c) {
  const CorrelationProfile p = correlation_profile({n, w, x});
  double sum = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (std::abs(p.mu[k]) > kDegenerateMu) continue;
    sum += std::log(per_port_bound_factor(p.mu[k], x, c));
  }
  return sum;
}

}  // namespace

const char* guard_name(DesignGuard g) {
  switch (g) {
    case DesignGuard::none: return "none";
    case DesignGuard::log_not_positive: return "log_not_positive";
    case DesignGuard::complex_mu: return "complex_mu";
    case DesignGuard::factor_out_of_range: return "factor_out_of_range";
    case DesignGuard::not_reached: return "not_reached";
    case DesignGuard::too_few_ports: return "too_few_ports";
    case DesignGuard::envelope_inverse: return "envelope_inverse";
  }
  return "unknown";
}

std::string guard_description(DesignGuard g) {
  switch (g) {
    case DesignGuard::none: return "";
    case DesignGuard::log_not_positive:
      return "ln(rho / (1 - R^(1/(M-1)))) is not positive, so mu* would exceed 1; more ports are needed";
    case DesignGuard::complex_mu:
      return "1 - kappa x / ln(.) is not positive, so mu* is complex; more ports are needed";
    case DesignGuard::factor_out_of_range:
      return "per-port bound factor is outside (0, 1); extra ports cannot lower the bound";
    case DesignGuard::not_reached:
      return "no port count up to the search limit satisfies the condition";
    case DesignGuard::too_few_ports:
      return "the rule needs more ports than were supplied";
    case DesignGuard::envelope_inverse:
      return "the J0 envelope inverse could not be certified";
  }
  return "unknown guard";
}

DesignAnswer DesignAnswer::fail(DesignGuard g) {
  DesignAnswer a;
  a.feasible = false;
  a.guard = g;
  a.guard_report = guard_description(g);
  return a;
}

void DesignQuery::validate() const {
  if (mrc_branches < 1) throw std::invalid_argument("mrc_branches must be >= 1");
  if (!(snr_ratio > 0.0) || !std::isfinite(snr_ratio)) {
    throw std::invalid_argument("snr_ratio must be positive");
  }
  if (!(constants.kappa > 1.0) || !(constants.rho > 0.0 && constants.rho < 0.5)) {
    throw ConstantsError("bound constants out of range");
  }
  if (size_wavelengths && !(*size_wavelengths > 0.0)) {
    throw std::invalid_argument("size_wavelengths must be positive");
  }
  if (n_ports && *n_ports < 1) throw std::invalid_argument("n_ports must be >= 1");
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
}

double DesignQuery::target_ratio() const {
  if (mrc_branches == 1) return 1.0;
  return outage_mrc(mrc_branches, snr_ratio) / -std::expm1(-snr_ratio);
}

DesignAnswer min_ports_general(const CorrelationProfile& profile, const DesignQuery& query) {
  query.validate();
  profile.validate();
  const double log_target = std::log(query.target_ratio());
  double log_prod = 0.0;
  if (log_prod < log_target) return DesignAnswer::ok(1);
  for (std::size_t k = 1; k < profile.size(); ++k) {
    if (std::abs(profile.mu[k]) <= kDegenerateMu) {
      log_prod += std::log(per_port_bound_factor(profile.mu[k], query.snr_ratio, query.constants));
    }
    if (log_prod < log_target) return DesignAnswer::ok(static_cast<double>(k + 1));
  }
  return DesignAnswer::fail(DesignGuard::too_few_ports);
}

DesignAnswer min_ports_for_size(const DesignQuery& query) {
  query.validate();
  if (!query.size_wavelengths) throw std::invalid_argument("min_ports_for_size needs size_wavelengths");
  const double w = *query.size_wavelengths;
  const double x = query.snr_ratio;
  const double log_target = std::log(query.target_ratio());
  auto beats = [&](int n) { return log_factor_product(n, w, x, query.constants) < log_target; };

  // Exhaustive scan for small N; beyond that the product falls roughly
  // geometrically with N, so bracket by doubling and bisect.
  constexpr int kLinearLimit = 4096;
  const int linear_end = std::min(query.n_max, kLinearLimit);
  for (int n = 1; n <= linear_end; ++n) {
    if (beats(n)) return DesignAnswer::ok(n);
  }
  int lo = linear_end;
  int hi = linear_end;
  while (hi < query.n_max) {
    lo = hi;
    hi = std::min(query.n_max, 2 * hi);
    if (beats(hi)) {
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (beats(mid) ? hi : lo) = mid;
      }
      return DesignAnswer::ok(hi);
    }
  }
  return DesignAnswer::fail(DesignGuard::not_reached);
}

DesignAnswer min_ports_homogeneous(double mu, const DesignQuery& query) {
  query.validate();
  if (!(std::abs(mu) < 1.0)) return DesignAnswer::fail(DesignGuard::factor_out_of_range);
  const double f = per_port_bound_factor(mu, query.snr_ratio, query.constants);
  if (!(f > 0.0 && f < 1.0)) return DesignAnswer::fail(DesignGuard::factor_out_of_range);
  const double log_target = std::log(query.target_ratio());
  const double log_f = std::log(f);
  // Condition: (N - 1) ln f < ln R.
  auto beats = [&](long long n) { return static_cast<double>(n - 1) * log_f < log_target; };
  const double bound = log_target / log_f + 1.0;
  if (!(bound < static_cast<double>(query.n_max))) return DesignAnswer::fail(DesignGuard::not_reached);
  long long n = static_cast<long long>(std::floor(bound)) + 1;
  n = std::max(n, 1LL);
  while (n > 1 && beats(n - 1)) --n;
  while (!beats(n)) ++n;
  if (n > query.n_max) return DesignAnswer::fail(DesignGuard::not_reached);
  return DesignAnswer::ok(static_cast<double>(n));
}

RequiredCorrelation required_mu_and_size(const DesignQuery& query) {
  query.validate();
  if (!query.n_ports) throw std::invalid_argument("required_mu_and_size needs n_ports");
  RequiredCorrelation out;
  const int n = *query.n_ports;
  if (n < 2) {
    out.guard = DesignGuard::too_few_ports;
    return out;
  }
  const double x = query.snr_ratio;
  const BoundConstants& c = query.constants;
  // 1 - R^{1/(N-1)} evaluated without cancellation.
  const double gap = -std::expm1(std::log(query.target_ratio()) / (n - 1));
  if (gap <= 0.0) {
    // R = 1 (single-branch MRC): any correlation below one suffices.
    out.feasible = true;
    out.mu_star = 1.0;
    out.d_star_wavelengths = 0.0;
    return out;
  }
  const double log_arg = std::log(c.rho / gap);
  if (!(log_arg > 0.0)) {
    out.guard = DesignGuard::log_not_positive;
    return out;
  }
  const double radicand = 1.0 - c.kappa * x / log_arg;
  if (!(radicand > 0.0)) {
    out.guard = DesignGuard::complex_mu;
    return out;
  }
  out.mu_star = std::sqrt(radicand);
  const specfun::EnvelopeInverseResult inv = specfun::inv_besselj0_envelope(out.mu_star);
  if (!inv.achieved) {
    out.guard = DesignGuard::envelope_inverse;
    return out;
  }
  out.feasible = true;
  out.d_star_wavelengths = inv.epsilon_star / (2.0 * std::numbers::pi);
  return out;
}

DesignAnswer min_size(const DesignQuery& query) {
  query.validate();
  if (!query.n_ports) throw std::invalid_argument("min_size needs n_ports");
  const int n = *query.n_ports;
  if (n < 4) return DesignAnswer::fail(DesignGuard::too_few_ports);
  DesignQuery half = query;
  half.n_ports = n / 2;
  const RequiredCorrelation rc = required_mu_and_size(half);
  if (!rc.feasible) {
    DesignAnswer a = DesignAnswer::fail(rc.guard);
    a.worst_case_ports = n / 2;
    return a;
  }
  DesignAnswer a = DesignAnswer::ok(rc.d_star_wavelengths);
  a.mu_star = rc.mu_star;
  a.worst_case_ports = n / 2;
  return a;
}

DesignAnswer first_feasible_size_ports(const DesignQuery& query) {
  query.validate();
  for (int n = 4; n <= query.n_max; n += 2) {
    DesignQuery q = query;
    q.n_ports = n;
    const DesignAnswer a = min_size(q);
    if (a.feasible) return DesignAnswer::ok(n);
    if (a.guard == DesignGuard::envelope_inverse) return a;
  }
  return DesignAnswer::fail(DesignGuard::not_reached);
}

KappaSweep kappa_sweep(const DesignQuery& query, const std::vector<double>& kappas, double anchor_w,
                       double rel_tol) {
  KappaSweep sweep;
  double best_err = std::numeric_limits<double>::infinity();
  for (double kappa : kappas) {
    DesignQuery q = query;
    q.constants = bound_constants(kappa);
    const DesignAnswer a = min_size(q);
    sweep.points.push_back({kappa, a.value});
    if (a.value) {
      const double err = std::abs(*a.value - anchor_w) / anchor_w;
      if (err < best_err) {
        best_err = err;
        sweep.best_kappa = kappa;
      }
      if (err <= rel_tol) sweep.anchor_reproduced = true;
    }
  }
  return sweep;
}

}  // namespace fas
