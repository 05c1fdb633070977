// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <json.hpp>

#include "fas/analytic.hpp"
#include "fas/bounds.hpp"
#include "fas/mc.hpp"
#include "fas/rng.hpp"
#include "fas/specfun.hpp"
#include "fas/version.hpp"

namespace fas {

namespace {

using specfun::marcum_q1;

// Stream ids for the randomized checks.
constexpr std::uint64_t kStreamN2 = 101;
constexpr std::uint64_t kStreamIdentity = 102;
constexpr std::uint64_t kStreamUpper = 103;
constexpr std::uint64_t kStreamLower = 104;

// Records one observation against a tolerance.
struct Tally {
  CheckResult r;

  Tally(std::string name, double tolerance) {
    r.name = std::move(name);
    r.tolerance = tolerance;
  }

  void observe(double err, bool ok) {
    ++r.cases;
    if (!ok) ++r.failures;
    if (std::isnan(err) || err > r.worst) r.worst = err;
  }
  void observe(double err) { observe(err, err <= r.tolerance); }

  CheckResult done(std::string detail = {}) {
    r.passed = r.failures == 0 && r.cases > 0;
    r.detail = std::move(detail);
    return r;
  }
};

CheckResult failed_with(const std::string& name, const std::exception& e) {
  CheckResult r;
  r.name = name;
  r.failures = 1;
  r.detail = std::string("exception: ") + e.what();
  return r;
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return failed_with(name, e);
  }
}

// Distinct seed per grid point so that one unlucky stream cannot sink
// several neighbouring configurations together.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1));
}

double uniform_in(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

}  // namespace

const char* preset_name(GridPreset p) { return p == GridPreset::quick ? "quick" : "default"; }

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["config"] = {
      {"preset", preset_name(options.preset)},
      {"trials", options.trials},
      {"seed", options.seed},
      {"workers", options.workers},
      {"quadrature", {{"abs_tol", options.quadrature.abs_tol},
                      {"rel_tol", options.quadrature.rel_tol},
                      {"max_subdivisions", options.quadrature.max_subdivisions}}},
  };
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"cases", c.cases},
                    {"failures", c.failures},
                    {"worst", c.worst},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
    if (!c.passed) failed.push_back(c.name);
  }
  doc["results"] = {{"passed", passed()}, {"checks", list}};
  nlohmann::ordered_json design = nlohmann::ordered_json::object();
  for (const auto& [name, count] : guards) design[name] = count;
  doc["guards"] = {{"design", design}, {"failed_checks", failed}};
  doc["version"] = kVersion;
  return doc.dump(2) + "\n";
}

std::vector<FasConfig> validation_grid(GridPreset preset) {
  std::vector<int> ns{1, 2, 3, 5, 10, 20};
  std::vector<double> ws{0.2, 0.5, 1.0, 2.0, 5.0};
  if (preset == GridPreset::quick) {
    ns = {1, 2, 5};
    ws = {0.5, 2.0};
  }
  std::vector<FasConfig> grid;
  for (int n : ns) {
    for (double w : ws) {
      for (double db : {-10.0, 0.0, 10.0}) grid.push_back(FasConfig::with_snr_db(n, w, db));
    }
  }
  return grid;
}

McGridChecks check_mc_grid(const std::vector<FasConfig>& grid, const ValidationOptions& o) {
  Tally agree("mc_vs_exact", 0.95);
  Tally cover("mc_coverage", 0.90);
  std::int64_t agreed = 0, covered = 0;
  double worst_sigma = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const FasConfig& c = grid[i];
    const double exact = outage_exact(c, o.quadrature);
    const McEstimate m = mc_outage_fas(c, McSettings{o.trials, point_seed(o.seed, i), o.workers});
    const double se = m.standard_error() > 0.0 ? m.standard_error() : 1.0 / static_cast<double>(m.trials);
    worst_sigma = std::max(worst_sigma, std::abs(exact - m.p_hat) / se);
    const bool ok = m.agrees_with(exact);
    agreed += ok ? 1 : 0;
    ++agree.r.cases;
    if (!ok) ++agree.r.failures;
    const double lo = m.p_hat - m.half_width_95;
    const double hi = m.p_hat > 0.0 ? m.p_hat + m.half_width_95 : 3.0 / static_cast<double>(m.trials);
    const bool inside = exact >= lo && exact <= hi;
    covered += inside ? 1 : 0;
    ++cover.r.cases;
    if (!inside) ++cover.r.failures;
  }
  const double n = static_cast<double>(grid.size());
  McGridChecks out;
  out.agreement = agree.r;
  out.agreement.worst = static_cast<double>(agreed) / n;
  out.agreement.passed = !grid.empty() && out.agreement.worst >= agree.r.tolerance;
  out.agreement.detail = fmt::format("largest deviation {} standard errors", worst_sigma);
  out.coverage = cover.r;
  out.coverage.worst = static_cast<double>(covered) / n;
  out.coverage.passed = !grid.empty() && out.coverage.worst >= cover.r.tolerance;
  return out;
}

CheckResult check_mc_mrc(const ValidationOptions& o) {
  Tally t("mc_mrc", 3.0);
  std::size_t index = 0;
  for (int l : {1, 2, 5}) {
    for (double x : {0.1, 1.0}) {
      const double exact = outage_mrc(l, x);
      const McEstimate m = mc_outage_mrc(l, x, McSettings{o.trials, point_seed(o.seed, index++), o.workers});
      const double se = m.standard_error() > 0.0 ? m.standard_error() : 1.0 / static_cast<double>(m.trials);
      t.observe(std::abs(exact - m.p_hat) / se, m.agrees_with(exact));
    }
  }
  return t.done("deviation in standard errors");
}

CheckResult check_n2_closed_form(int draws, std::uint64_t seed, const QuadratureSettings& q) {
  Tally t("n2_closed_form", 1e-8);
  RandomStream rng(seed, kStreamN2);
  for (int i = 0; i < draws; ++i) {
    const double mu = uniform_in(rng, -0.99, 0.99);
    const double x = db_to_linear(uniform_in(rng, -10.0, 10.0));
    const CorrelationProfile p{{0.0, mu}, {0.0, 1.0}};
    t.observe(std::abs(outage_exact(p, x, q) - outage_n2_closed_form(mu, x)));
  }
  return t.done();
}

CheckResult check_integral_identity(int draws, std::uint64_t seed, const QuadratureSettings& q) {
  Tally t("integral_identity", 1e-8);
  RandomStream rng(seed, kStreamIdentity);
  for (int i = 0; i < draws; ++i) {
    const double a = uniform_in(rng, 0.1, 3.0);
    const double b = uniform_in(rng, 0.1, 3.0);
    const double c = uniform_in(rng, 0.1, 3.0);
    auto f = [&](double u) { return std::exp(-u) * marcum_q1(a * std::sqrt(u), b); };
    const double lhs = integrate(f, 0.0, c, q).value;
    const double s = a * a + 2.0;
    const double rhs = std::exp(-b * b / s) * marcum_q1(std::sqrt(c * s), a * b / std::sqrt(s)) -
                       std::exp(-c) * marcum_q1(a * std::sqrt(c), b);
    t.observe(std::abs(lhs - rhs));
  }
  return t.done();
}

CheckResult check_independent_ports(const QuadratureSettings& q) {
  Tally t("independent_ports", 1e-9);
  for (int n : {1, 2, 3, 5, 10, 20, 50}) {
    for (double db : {-10.0, 0.0, 10.0}) {
      const double x = db_to_linear(db);
      const double expected = std::pow(-std::expm1(-x), n);
      t.observe(std::abs(outage_exact(independent_profile(n), x, q) - expected));
    }
  }
  return t.done();
}

CheckResult check_degenerate_port(const QuadratureSettings& q) {
  Tally t("degenerate_port", 1e-6);
  const double mu = 1.0 - 1e-12;
  for (const FasConfig& c : {FasConfig{1, 1.0, 1.0}, FasConfig{3, 0.5, 1.0}, FasConfig{5, 2.0, 0.1},
                             FasConfig{10, 5.0, 10.0}}) {
    const CorrelationProfile p = correlation_profile(c);
    const CorrelationProfile extended = p.with_port(mu, p.displacements.back());
    t.observe(std::abs(outage_exact(extended, c.snr_ratio, q) - outage_exact(p, c.snr_ratio, q)));
  }
  return t.done();
}

CheckResult check_bound_ordering(const std::vector<FasConfig>& grid, const std::vector<double>& kappas,
                                 const QuadratureSettings& q) {
  Tally t("bound_ordering", 1e-12);
  for (const FasConfig& c : grid) {
    const double exact = outage_exact(c, q);
    for (double kappa : kappas) {
      const double bound = outage_upper_bound(c, bound_constants(kappa));
      t.observe(std::max(0.0, exact - bound));
    }
  }
  return t.done("largest excess of exact over the bound");
}

CheckResult check_marcum_special_values() {
  Tally t("marcum_special_values", 1e-12);
  for (double v : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
    t.observe(std::abs(marcum_q1(v, 0.0) - 1.0));
    t.observe(std::abs(marcum_q1(0.0, v) - std::exp(-v * v / 2.0)));
  }
  return t.done();
}

CheckResult check_marcum_diagonal_limit(const std::vector<double>& ladder, double threshold) {
  Tally t("marcum_diagonal_limit", threshold);
  double previous = 1.0;
  int rises = 0;
  for (double a : ladder) {
    const double gap = std::abs(marcum_q1(a, a) - 0.5);
    if (!(gap < previous)) ++rises;
    previous = gap;
    ++t.r.cases;
  }
  t.r.worst = previous;
  t.r.failures = rises + (previous < t.r.tolerance ? 0 : 1);
  return t.done(fmt::format("|Q1(a,a) - 1/2| at a = {}; failures count non-decreasing steps and a final gap "
                            "above tolerance",
                            ladder.empty() ? 0.0 : ladder.back()));
}

CheckResult check_marcum_monotonicity() {
  Tally t("marcum_monotonicity", 0.0);
  constexpr int kSide = 50;
  std::vector<double> grid(kSide);
  for (int i = 0; i < kSide; ++i) grid[static_cast<std::size_t>(i)] = 10.0 * i / (kSide - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double q = marcum_q1(grid[i], grid[j]);
      if (j + 1 < grid.size()) t.observe(std::max(0.0, marcum_q1(grid[i], grid[j + 1]) - q));
      if (i + 1 < grid.size()) t.observe(std::max(0.0, q - marcum_q1(grid[i + 1], grid[j])));
    }
  }
  return t.done("decreasing in b, nondecreasing in a");
}

CheckResult check_marcum_upper_bound(int draws, std::uint64_t seed) {
  Tally t("marcum_upper_bound", 0.0);
  RandomStream rng(seed, kStreamUpper);
  for (int i = 0; i < draws; ++i) {
    double a = uniform_in(rng, 0.0, 20.0);
    double b = uniform_in(rng, 0.0, 20.0);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const double bound = b / (b - a) / std::sqrt(1.0 + 2.0 * a * b);
    const double q = marcum_q1(a, b);
    t.observe(std::max(0.0, q - bound), q < bound);
  }
  return t.done("Q1(a,b) < b / ((b - a) sqrt(1 + 2ab)) for 0 <= a < b <= 20");
}

CheckResult check_marcum_lower_bound(const std::vector<double>& kappas, int draws, std::uint64_t seed) {
  Tally t("marcum_lower_bound", 0.0);
  RandomStream rng(seed, kStreamLower);
  for (double kappa : kappas) {
    const BoundConstants c = bound_constants(kappa);
    for (int i = 0; i < draws; ++i) {
      const double b = uniform_in(rng, 10.0, 25.0);
      const double a = b * rng.uniform();
      // Compared in logs: Q1 reaches 1e-130 on this domain.
      const double log_bound = std::log(c.rho) + 0.5 * std::log(b / a) - kappa * (b - a) * (b - a) / 2.0;
      const double log_q = std::log(marcum_q1(a, b));
      t.observe(std::max(0.0, log_bound - log_q), log_q >= log_bound);
    }
  }
  return t.done("ln Q1(a,b) >= ln(rho sqrt(b/a)) - kappa (b - a)^2 / 2 for 0 < a < b, b in [10, 25]");
}

CheckResult check_quadrature_settings(const QuadratureSettings& q) {
  Tally t("quadrature_settings", 1e-9);
  t.observe(q.abs_tol);
  return t.done("absolute quadrature tolerance must not exceed the tightest asserted tolerance");
}

DesignRoundTrip check_design_round_trip(int mrc_branches, double snr_ratio, double kappa, int n_max) {
  DesignRoundTrip out;
  Tally mono("design_monotone", 0.0);
  Tally recheck("design_recheck", 1e-9);
  DesignQuery q;
  q.mrc_branches = mrc_branches;
  q.snr_ratio = snr_ratio;
  q.constants = bound_constants(kappa);
  const double level = outage_mrc(mrc_branches, snr_ratio);
  const double single = -std::expm1(-snr_ratio);
  std::optional<double> previous;
  for (int n = 4; n <= n_max; ++n) {
    q.n_ports = n;
    const DesignAnswer a = min_size(q);
    if (!a.feasible) {
      ++out.guards[guard_name(a.guard)];
      continue;
    }
    if (previous) mono.observe(std::max(0.0, *a.value - *previous));
    previous = a.value;
    const int m = *a.worst_case_ports;
    const double mu = *a.mu_star;
    // The rule solves the fallback-factor equality exactly; the full bound
    // factor is never larger, so the bound itself lands at or below MRC.
    const double fixed_point =
        single * std::pow(reduced_port_bound_factor(mu, snr_ratio, q.constants), m - 1);
    recheck.observe(std::abs(fixed_point - level));
    const double bound = outage_upper_bound(homogeneous_profile(m, mu), snr_ratio, q.constants);
    recheck.observe(std::max(0.0, bound - level));
  }
  out.monotone = mono.done(fmt::format("N = 4..{}, L = {}, kappa = {}", n_max, mrc_branches, kappa));
  out.recheck = recheck.done("fixed point of the fallback factor and bound <= MRC level");
  return out;
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  report.options = options;
  const QuadratureSettings& q = options.quadrature;
  const std::vector<FasConfig> grid = validation_grid(options.preset);
  const std::vector<double> kappas{1.5, 2.0, 3.0};
  auto& out = report.checks;

  out.push_back(guarded("quadrature_settings", [&] { return check_quadrature_settings(q); }));
  try {
    const McGridChecks mc = check_mc_grid(grid, options);
    out.push_back(mc.agreement);
    out.push_back(mc.coverage);
  } catch (const std::exception& e) {
    out.push_back(failed_with("mc_vs_exact", e));
  }
  out.push_back(guarded("mc_mrc", [&] { return check_mc_mrc(options); }));
  out.push_back(guarded("n2_closed_form", [&] { return check_n2_closed_form(100, options.seed, q); }));
  out.push_back(guarded("integral_identity", [&] { return check_integral_identity(50, options.seed, q); }));
  out.push_back(guarded("independent_ports", [&] { return check_independent_ports(q); }));
  out.push_back(guarded("degenerate_port", [&] { return check_degenerate_port(q); }));
  out.push_back(guarded("bound_ordering", [&] { return check_bound_ordering(grid, kappas, q); }));
  out.push_back(guarded("marcum_special_values", [] { return check_marcum_special_values(); }));
  out.push_back(guarded("marcum_diagonal_limit", [] { return check_marcum_diagonal_limit({1.0, 2.0, 4.0, 8.0, 16.0, 32.0}, 0.01); }));
  out.push_back(guarded("marcum_monotonicity", [] { return check_marcum_monotonicity(); }));
  out.push_back(guarded("marcum_upper_bound", [&] { return check_marcum_upper_bound(2000, options.seed); }));
  out.push_back(
      guarded("marcum_lower_bound", [&] { return check_marcum_lower_bound(kappas, 2000, options.seed); }));
  try {
    DesignRoundTrip d = check_design_round_trip(2, 1.0, kDefaultKappa, 1000);
    out.push_back(d.monotone);
    out.push_back(d.recheck);
    report.guards = d.guards;
  } catch (const std::exception& e) {
    out.push_back(failed_with("design_round_trip", e));
  }
  return report;
}

}  // namespace fas
