// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fas/bounds.hpp"
#include "fas/channel.hpp"

namespace fas {

/// Why a design rule has no solution. Every infeasible answer carries
/// exactly one of these.
enum class DesignGuard {
  none,
  log_not_positive,    // ln(rho / (1 - R^{1/(M-1)})) <= 0, i.e. mu* would exceed 1
  complex_mu,          // 1 - kappa x / ln(.) <= 0, i.e. mu* imaginary (or zero)
  factor_out_of_range, // homogeneous per-port factor not in (0, 1)
  not_reached,         // no N up to the search limit satisfies the rule
  too_few_ports,       // the rule needs more ports than were given
  envelope_inverse,    // J0 envelope inverse could not be certified
};

const char* guard_name(DesignGuard g);
std::string guard_description(DesignGuard g);

struct DesignQuery {
  int mrc_branches = 2;
  double snr_ratio = 1.0;
  BoundConstants constants = bound_constants();
  std::optional<double> size_wavelengths;
  std::optional<int> n_ports;
  int n_max = 100000;

  void validate() const;
  /// p_MRC,L(x) / (1 - e^{-x}), the product the per-port factors must beat.
  double target_ratio() const;
};

struct DesignAnswer {
  std::optional<double> value;
  bool feasible = false;
  DesignGuard guard = DesignGuard::none;
  std::string guard_report;
  // Extra detail for the size rules.
  std::optional<double> mu_star;
  std::optional<int> worst_case_ports;

  static DesignAnswer ok(double v) { return {v, true, DesignGuard::none, "", {}, {}}; }
  static DesignAnswer fail(DesignGuard g);
};

/// Smallest prefix length N of `profile` whose per-port bound factors
/// multiply to less than the MRC target ratio.
DesignAnswer min_ports_general(const CorrelationProfile& profile, const DesignQuery& query);

/// Smallest N such that the (N, W) port layout with W = query.size_wavelengths
/// beats MRC through the bound. The profile is rebuilt for every N.
DesignAnswer min_ports_for_size(const DesignQuery& query);

/// Homogeneous correlation mu: smallest integer N with
/// N > ln(R) / ln(factor(mu)) + 1.
DesignAnswer min_ports_homogeneous(double mu, const DesignQuery& query);

struct RequiredCorrelation {
  bool feasible = false;
  DesignGuard guard = DesignGuard::none;
  double mu_star = 0.0;
  double d_star_wavelengths = 0.0;
};

/// Largest common correlation mu* that still beats MRC with query.n_ports
/// homogeneous ports, and the port spacing d* (wavelengths) past which
/// |J0(2 pi d)| <= mu*.
RequiredCorrelation required_mu_and_size(const DesignQuery& query);

/// Minimum size W for query.n_ports ports, using floor(N/2) homogeneous ports
/// at mu* as the worst case.
DesignAnswer min_size(const DesignQuery& query);

/// Smallest N (>= 4) for which min_size is feasible, or not_reached.
DesignAnswer first_feasible_size_ports(const DesignQuery& query);

struct KappaSweepPoint {
  double kappa = 0.0;
  std::optional<double> w_min;
};

struct KappaSweep {
  std::vector<KappaSweepPoint> points;
  std::optional<double> best_kappa;  // kappa whose W is closest to the anchor
  bool anchor_reproduced = false;    // some kappa within rel_tol of the anchor
};

/// Evaluates min_size for every kappa in `kappas` and compares with an
/// expected size.
KappaSweep kappa_sweep(const DesignQuery& query, const std::vector<double>& kappas,
                       double anchor_w, double rel_tol = 0.1);

}  // namespace fas
