// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/mc.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fas/analytic.hpp"
#include "fas/quadrature.hpp"
#include "fas/rng.hpp"

namespace fas {

namespace {

// Runs `body(rng, first, count)` on every worker block and sums the results
// in worker order.
template <class Body>
std::int64_t run_blocks(const McSettings& s, Body body) {
  s.validate();
  const int workers = s.workers;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(workers), 0);
  auto block = [&](int w) {
    const std::int64_t begin = s.trials * w / workers;
    const std::int64_t end = s.trials * (w + 1) / workers;
    RandomStream rng(s.seed, static_cast<std::uint64_t>(w));
    hits[static_cast<std::size_t>(w)] = body(rng, end - begin);
  };
  if (workers == 1) {
    block(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(block, w);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return total;
}

}  // namespace

void McSettings::validate() const {
  if (trials < 1000) throw std::invalid_argument("Monte-Carlo needs at least 1000 trials");
  if (workers < 1) throw std::invalid_argument("Monte-Carlo needs at least one worker");
}

McEstimate McEstimate::from_counts(std::int64_t hits, std::int64_t trials) {
  McEstimate e;
  e.trials = trials;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  e.half_width_95 = 1.96 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
  return e;
}

double McEstimate::standard_error() const {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

bool McEstimate::agrees_with(double value, double sigmas) const {
  double se = standard_error();
  if (se == 0.0) se = 1.0 / static_cast<double>(trials);
  return std::abs(value - p_hat) <= sigmas * se;
}

McEstimate mc_outage_fas(const CorrelationProfile& profile, double snr_ratio, const McSettings& settings) {
  profile.validate();
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  std::vector<double> mix(profile.mu.begin() + 1, profile.mu.end());
  std::vector<double> own(mix.size());
  for (std::size_t k = 0; k < mix.size(); ++k) own[k] = std::sqrt(std::max(0.0, 1.0 - mix[k] * mix[k]));
  const double threshold = snr_ratio;

  const std::int64_t hits = run_blocks(settings, [&](RandomStream& rng, std::int64_t count) {
    std::int64_t local = 0;
    for (std::int64_t i = 0; i < count; ++i) {
      const double x0 = rng.half_gaussian();
      const double y0 = rng.half_gaussian();
      // Stop drawing ports as soon as one clears the threshold.
      bool outage = x0 * x0 + y0 * y0 < threshold;
      for (std::size_t k = 0; outage && k < mix.size(); ++k) {
        const double re = own[k] * rng.half_gaussian() + mix[k] * x0;
        const double im = own[k] * rng.half_gaussian() + mix[k] * y0;
        outage = re * re + im * im < threshold;
      }
      local += outage ? 1 : 0;
    }
    return local;
  });
  return McEstimate::from_counts(hits, settings.trials);
}

McEstimate mc_outage_fas(const FasConfig& config, const McSettings& settings) {
  config.validate();
  return mc_outage_fas(correlation_profile(config), config.snr_ratio, settings);
}

McEstimate mc_outage_mrc(int branches, double snr_ratio, const McSettings& settings) {
  if (branches < 1) throw std::invalid_argument("MRC needs at least one branch");
  if (!(snr_ratio > 0.0)) throw std::invalid_argument("snr_ratio must be positive");
  const std::int64_t hits = run_blocks(settings, [&](RandomStream& rng, std::int64_t count) {
    std::int64_t local = 0;
    for (std::int64_t i = 0; i < count; ++i) {
      double power = 0.0;
      for (int b = 0; b < branches; ++b) {
        const double re = rng.half_gaussian();
        const double im = rng.half_gaussian();
        power += re * re + im * im;
      }
      local += power < snr_ratio ? 1 : 0;
    }
    return local;
  });
  return McEstimate::from_counts(hits, settings.trials);
}

std::optional<std::int64_t> rare_event_trials(double analytic_hint, std::int64_t base_trials) {
  if (!(analytic_hint < kRareEventThreshold)) return base_trials;
  if (!(analytic_hint > 0.0)) return std::nullopt;
  const double needed = std::ceil(100.0 / analytic_hint);
  if (needed > static_cast<double>(kMaxAutoTrials)) return std::nullopt;
  return std::max(base_trials, static_cast<std::int64_t>(needed));
}

std::optional<McEstimate> mc_outage_fas_auto(const CorrelationProfile& profile, double snr_ratio,
                                             double analytic_hint, const McSettings& settings) {
  const auto trials = rare_event_trials(analytic_hint, settings.trials);
  if (!trials) return std::nullopt;
  McSettings scaled = settings;
  scaled.trials = *trials;
  return mc_outage_fas(profile, snr_ratio, scaled);
}

GoodnessOfFit mc_joint_density_check(const CorrelationProfile& generator, double model_mu2,
                                     const McSettings& settings, const HistogramSpec& grid) {
  generator.validate();
  if (generator.size() != 2) throw std::invalid_argument("joint density check needs a two-port profile");
  if (!(std::abs(model_mu2) < 1.0)) throw SingularProfileError("model mu2 must satisfy |mu2| < 1");
  if (grid.bins < 2 || !(grid.r_max > 0.0)) throw std::invalid_argument("bad histogram grid");
  settings.validate();

  const int bins = grid.bins;
  const double width = grid.r_max / bins;
  const std::size_t cells = static_cast<std::size_t>(bins * bins);

  // Observed counts; index `cells` is everything outside the grid.
  std::vector<std::int64_t> observed(cells + 1, 0);
  {
    const int workers = settings.workers;
    std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(workers),
                                                   std::vector<std::int64_t>(cells + 1, 0));
    auto block = [&](int w) {
      const std::int64_t begin = settings.trials * w / workers;
      const std::int64_t end = settings.trials * (w + 1) / workers;
      RandomStream rng(settings.seed, static_cast<std::uint64_t>(w));
      auto& counts = partial[static_cast<std::size_t>(w)];
      for (std::int64_t i = begin; i < end; ++i) {
        const ChannelDraw d = draw_channels(generator, rng);
        const int i1 = static_cast<int>(std::abs(d.gains[0]) / width);
        const int i2 = static_cast<int>(std::abs(d.gains[1]) / width);
        if (i1 < bins && i2 < bins) {
          ++counts[static_cast<std::size_t>(i1 * bins + i2)];
        } else {
          ++counts[cells];
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(block, w);
    block(0);
    for (auto& t : pool) t.join();
    for (const auto& p : partial) {
      for (std::size_t c = 0; c <= cells; ++c) observed[c] += p[c];
    }
  }

  // Expected cell probabilities from nested quadrature of the joint density.
  const CorrelationProfile model{{0.0, model_mu2}, {0.0, 1.0}};
  QuadratureSettings q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-10;
  std::vector<double> prob(cells + 1, 0.0);
  double inside = 0.0;
  for (int i1 = 0; i1 < bins; ++i1) {
    for (int i2 = 0; i2 < bins; ++i2) {
      auto row = [&](double r1) {
        auto col = [&](double r2) {
          const double r[2] = {r1, r2};
          return joint_pdf(model, r);
        };
        return integrate(col, i2 * width, (i2 + 1) * width, q).value;
      };
      const double p = integrate(row, i1 * width, (i1 + 1) * width, q).value;
      prob[static_cast<std::size_t>(i1 * bins + i2)] = p;
      inside += p;
    }
  }
  prob[cells] = std::max(0.0, 1.0 - inside);

  // Pool sparse cells, then fold the pool into the outside cell if it is
  // still too small on its own.
  const double n = static_cast<double>(settings.trials);
  GoodnessOfFit gof;
  double pool_obs = 0.0, pool_exp = 0.0;
  std::vector<std::pair<double, double>> used;
  for (std::size_t c = 0; c <= cells; ++c) {
    const double expected = n * prob[c];
    if (expected < 5.0) {
      pool_obs += static_cast<double>(observed[c]);
      pool_exp += expected;
      ++gof.pooled_cells;
    } else {
      used.emplace_back(static_cast<double>(observed[c]), expected);
    }
  }
  if (pool_exp >= 5.0) {
    used.emplace_back(pool_obs, pool_exp);
  } else if (!used.empty()) {
    used.back().first += pool_obs;
    used.back().second += pool_exp;
  }
  for (const auto& [obs, expected] : used) {
    const double diff = obs - expected;
    gof.statistic += diff * diff / expected;
  }
  gof.degrees_of_freedom = std::max(1, static_cast<int>(used.size()) - 1);
  const boost::math::chi_squared dist(gof.degrees_of_freedom);
  gof.critical_1pct = boost::math::quantile(boost::math::complement(dist, 0.01));
  return gof;
}

}  // namespace fas
