// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fas/channel.hpp"
#include "fas/design.hpp"
#include "fas/quadrature.hpp"

namespace fas {

enum class GridPreset { standard, quick };

const char* preset_name(GridPreset p);

struct ValidationOptions {
  GridPreset preset = GridPreset::standard;
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  int workers = 1;
  QuadratureSettings quadrature{};
};

/// Outcome of one invariant. `worst` is the largest observed discrepancy in
/// the units of `tolerance`; for fraction-type checks it is the observed
/// fraction and `tolerance` the required one.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  ValidationOptions options;
  std::vector<CheckResult> checks;
  // Design guards met while sweeping N, with how often each fired.
  std::map<std::string, int> guards;

  bool passed() const;
  /// Deterministic JSON with `config`, `results`, `guards` and `version`.
  std::string to_json() const;
};

/// N in {1,2,3,5,10,20}, W in {0.2,0.5,1,2,5}, threshold in {-10,0,10} dB.
/// The quick preset keeps N in {1,2,5}, W in {0.5,2}.
std::vector<FasConfig> validation_grid(GridPreset preset);

// Individual checks. Every random sample is drawn from RandomStream(seed, .)
// so each check is reproducible on its own.
struct McGridChecks {
  CheckResult agreement;  // |p_hat - exact| <= 3 s.e. on >= 95% of the grid
  CheckResult coverage;   // 95% interval holds exact on >= 90% of the grid
};

/// Grid point i draws from its own seed derived from (o.seed, i). A zero-hit
/// estimate uses the one-sided interval [0, 3/trials].
McGridChecks check_mc_grid(const std::vector<FasConfig>& grid, const ValidationOptions& o);
CheckResult check_mc_mrc(const ValidationOptions& o);
CheckResult check_n2_closed_form(int draws, std::uint64_t seed, const QuadratureSettings& q);
CheckResult check_integral_identity(int draws, std::uint64_t seed, const QuadratureSettings& q);
CheckResult check_independent_ports(const QuadratureSettings& q);
CheckResult check_degenerate_port(const QuadratureSettings& q);
CheckResult check_bound_ordering(const std::vector<FasConfig>& grid, const std::vector<double>& kappas,
                                 const QuadratureSettings& q);
CheckResult check_marcum_special_values();
/// |Q1(a,a) - 1/2| = e^{-a^2} I0(a^2) / 2 must fall strictly along the ladder
/// and end below `threshold`.
CheckResult check_marcum_diagonal_limit(const std::vector<double>& ladder, double threshold);
CheckResult check_marcum_monotonicity();
CheckResult check_marcum_upper_bound(int draws, std::uint64_t seed);
CheckResult check_marcum_lower_bound(const std::vector<double>& kappas, int draws, std::uint64_t seed);
CheckResult check_quadrature_settings(const QuadratureSettings& q);

struct DesignRoundTrip {
  CheckResult monotone;
  CheckResult recheck;
  std::map<std::string, int> guards;
};

/// min_size over N = 4..n_max for (L, x, kappa): the frontier must be
/// nonincreasing and every feasible W must satisfy the per-port product rule
/// with floor(N/2) ports at mu*.
DesignRoundTrip check_design_round_trip(int mrc_branches, double snr_ratio, double kappa, int n_max);

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace fas
