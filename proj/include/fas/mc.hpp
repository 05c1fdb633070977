// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <cstdint>
#include <optional>

#include "fas/channel.hpp"

namespace fas {

/// Trials are split into `workers` contiguous blocks; block w draws from
/// RandomStream(seed, w). A given (trials, seed, workers) triple therefore
/// reproduces the same estimate bit for bit.
struct McSettings {
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  int workers = 1;

  void validate() const;
};

struct McEstimate {
  double p_hat = 0.0;
  double half_width_95 = 0.0;
  std::int64_t trials = 0;

  static McEstimate from_counts(std::int64_t hits, std::int64_t trials);
  double standard_error() const;
  /// |value - p_hat| <= sigmas * standard error. A zero-hit estimate uses the
  /// standard error of a single hit so that tiny analytic values still pass.
  bool agrees_with(double value, double sigmas = 3.0) const;
};

/// Fraction of draws with max_k |g_k|^2 < x (sigma = 1).
McEstimate mc_outage_fas(const CorrelationProfile& profile, double snr_ratio, const McSettings& settings);
McEstimate mc_outage_fas(const FasConfig& config, const McSettings& settings);

/// Fraction of draws with sum_{i<L} |h_i|^2 < x, h_i i.i.d. CN(0, 1).
McEstimate mc_outage_mrc(int branches, double snr_ratio, const McSettings& settings);

inline constexpr double kRareEventThreshold = 1.0e-4;
inline constexpr std::int64_t kMaxAutoTrials = 1'000'000'000;

/// Trial count needed for ~100 expected outages when the analytic value is
/// below kRareEventThreshold; empty when that exceeds kMaxAutoTrials.
std::optional<std::int64_t> rare_event_trials(double analytic_hint, std::int64_t base_trials);

/// mc_outage_fas with the rare-event trial scaling applied. Empty means the
/// estimate was skipped and only the analytic value should be reported.
std::optional<McEstimate> mc_outage_fas_auto(const CorrelationProfile& profile, double snr_ratio,
                                             double analytic_hint, const McSettings& settings);

struct HistogramSpec {
  double r_max = 3.0;
  int bins = 12;
};

struct GoodnessOfFit {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double critical_1pct = 0.0;
  int pooled_cells = 0;

  bool passes() const { return statistic < critical_1pct; }
};

/// Pearson chi-square of the 2-D histogram of (|g_1|, |g_2|) drawn from
/// `generator` against cell integrals of the two-port joint density with
/// correlation `model_mu2`. Cells expecting fewer than 5 counts are pooled.
GoodnessOfFit mc_joint_density_check(const CorrelationProfile& generator, double model_mu2,
                                     const McSettings& settings, const HistogramSpec& grid = {});

}  // namespace fas
