// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors
//
// fas: outage curves, bound comparisons, design rules, envelope traces and
// the validation suite for a fluid antenna system with one RF chain.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fas/analytic.hpp"
#include "fas/bounds.hpp"
#include "fas/design.hpp"
#include "fas/mc.hpp"
#include "fas/specfun.hpp"
#include "fas/validate.hpp"
#include "fas/version.hpp"

namespace {

using namespace fas;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "a:b:s" -> a, a+s, ..., up to b inclusive.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("bad range '{}': expected start:stop:step", text));
    }
  }
  if (parts.size() == 2) parts.push_back(1.0);
  if (parts.size() != 3) throw UsageError(fmt::format("bad range '{}': expected start:stop:step", text));
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0)) throw UsageError(fmt::format("range '{}' needs a positive step", text));
  std::vector<double> values;
  for (long i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9 * step) break;
    values.push_back(v);
    if (values.size() > 1'000'000) throw UsageError(fmt::format("range '{}' is too long", text));
  }
  if (values.empty()) throw UsageError(fmt::format("range '{}' is empty", text));
  return values;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_range(text)) {
    if (v != std::floor(v)) throw UsageError(fmt::format("range '{}' must hold integers", text));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError(fmt::format("cannot open '{}' for writing", path));
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }

// ---------------------------------------------------------------- sweeps ----

struct SweepFlags {
  int n_ports = 10;
  double size_wl = 0.5;
  double snr_db = 0.0;
  std::string sweep_n, sweep_w, sweep_snr;
  bool independent = false;
  double kappa = kDefaultKappa;
  bool mc = false;
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  int workers = 1;
  std::string out;
  std::vector<int> mrc_l{2, 5, 8};
};

struct SweepPoint {
  int n_ports;
  double size_wl;
  double snr_db;
};

std::vector<SweepPoint> expand(const SweepFlags& f) {
  const int given = !f.sweep_n.empty() + !f.sweep_w.empty() + !f.sweep_snr.empty();
  if (given > 1) throw UsageError("choose at most one of --sweep-n, --sweep-w, --sweep-snr");
  std::vector<SweepPoint> pts;
  if (!f.sweep_n.empty()) {
    for (int n : parse_int_range(f.sweep_n)) pts.push_back({n, f.size_wl, f.snr_db});
  } else if (!f.sweep_w.empty()) {
    for (double w : parse_range(f.sweep_w)) pts.push_back({f.n_ports, w, f.snr_db});
  } else if (!f.sweep_snr.empty()) {
    for (double db : parse_range(f.sweep_snr)) pts.push_back({f.n_ports, f.size_wl, db});
  } else {
    pts.push_back({f.n_ports, f.size_wl, f.snr_db});
  }
  for (const SweepPoint& p : pts) {
    FasConfig::with_snr_db(p.n_ports, p.size_wl, p.snr_db).validate();
  }
  return pts;
}

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--n-ports", f.n_ports, "number of ports N")->capture_default_str();
  cmd->add_option("--size-wl", f.size_wl, "size W in wavelengths")->capture_default_str();
  cmd->add_option("--snr-db", f.snr_db, "threshold over mean SNR, dB")->capture_default_str();
  cmd->add_option("--sweep-n", f.sweep_n, "sweep N as start:stop:step");
  cmd->add_option("--sweep-w", f.sweep_w, "sweep W as start:stop:step");
  cmd->add_option("--sweep-snr", f.sweep_snr, "sweep the threshold (dB) as start:stop:step");
  cmd->add_flag("--independent", f.independent, "force every mu_k to 0");
  cmd->add_option("--kappa", f.kappa, "bound constant kappa > 1")->capture_default_str();
  cmd->add_flag("--mc", f.mc, "add Monte-Carlo columns");
  cmd->add_option("--trials", f.trials, "Monte-Carlo trials")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Monte-Carlo seed")->capture_default_str();
  cmd->add_option("--workers", f.workers, "Monte-Carlo worker threads")->capture_default_str();
  cmd->add_option("--out", f.out, "output file (default stdout)");
}

void provenance(std::ostream& os, const std::string& command, const SweepFlags& f) {
  os << fmt::format("# fas {} {}\n", kVersion, command);
  os << fmt::format("# config n_ports={} size_wl={} snr_db={} sweep_n={} sweep_w={} sweep_snr={} "
                    "independent={} kappa={}\n",
                    f.n_ports, f.size_wl, f.snr_db, f.sweep_n, f.sweep_w, f.sweep_snr, f.independent,
                    f.kappa);
  os << fmt::format("# mc={} trials={} seed={} workers={}\n", f.mc, f.trials, f.seed, f.workers);
}

struct Row {
  SweepPoint p;
  double exact, approx, bound;
  std::optional<double> mc, mc_hw;
  std::string mc_status;
  std::vector<double> mrc;
};

std::vector<Row> evaluate(const SweepFlags& f, bool with_mrc) {
  if (!(f.kappa > 1.0)) throw UsageError("--kappa must exceed 1");
  const BoundConstants c = bound_constants(f.kappa);
  McSettings s{f.trials, f.seed, f.workers};
  if (f.mc) s.validate();
  std::vector<Row> rows;
  for (const SweepPoint& p : expand(f)) {
    const FasConfig cfg = FasConfig::with_snr_db(p.n_ports, p.size_wl, p.snr_db);
    const CorrelationProfile prof = f.independent ? independent_profile(p.n_ports) : correlation_profile(cfg);
    const double x = cfg.snr_ratio;
    Row r{p, outage_exact(prof, x), outage_approx(prof, x), outage_upper_bound(prof, x, c), {}, {}, "off", {}};
    if (f.mc) {
      if (const auto m = mc_outage_fas_auto(prof, x, r.exact, s)) {
        r.mc = m->p_hat;
        r.mc_hw = m->half_width_95;
        r.mc_status = "ok";
      } else {
        r.mc_status = "skipped";
      }
    }
    if (with_mrc) {
      for (int l : f.mrc_l) r.mrc.push_back(outage_mrc(l, x));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_rows(std::ostream& os, const std::vector<Row>& rows, const std::vector<int>& mrc_l) {
  os << "n_ports,size_wl,snr_db,exact,approx,approx_negative,upper_bound,mc,mc_half_width_95,mc_status";
  for (int l : mrc_l) os << ",mrc_l" << l;
  os << "\n";
  for (const Row& r : rows) {
    std::string line = fmt::format("{},{},{},{},{},{},{},{},{},{}", r.p.n_ports, r.p.size_wl, r.p.snr_db,
                                   r.exact, r.approx, r.approx < 0.0 ? 1 : 0, r.bound, opt(r.mc),
                                   opt(r.mc_hw), r.mc_status);
    for (double m : r.mrc) fmt::format_to(std::back_inserter(line), ",{}", m);
    os << line << "\n";
  }
}

int cmd_outage_curve(const SweepFlags& f) {
  const std::vector<Row> rows = evaluate(f, false);
  Output out(f.out);
  provenance(out.stream(), "outage-curve", f);
  write_rows(out.stream(), rows, {});
  return kExitOk;
}

int cmd_bounds_compare(const SweepFlags& f) {
  for (int l : f.mrc_l) {
    if (l < 1) throw UsageError("--mrc-l values must be >= 1");
  }
  const std::vector<Row> rows = evaluate(f, true);
  Output out(f.out);
  provenance(out.stream(), "bounds-compare", f);
  if (!f.sweep_n.empty()) {
    for (std::size_t j = 0; j < f.mrc_l.size(); ++j) {
      std::string where = "none";
      for (const Row& r : rows) {
        if (r.exact < r.mrc[j]) {
          where = fmt::format("{}", r.p.n_ports);
          break;
        }
      }
      out.stream() << fmt::format("# crossing mrc_l={} level={} n_ports={}\n", f.mrc_l[j], rows.front().mrc[j],
                                  where);
    }
  }
  write_rows(out.stream(), rows, f.mrc_l);
  return kExitOk;
}

// ---------------------------------------------------------------- design ----

struct DesignFlags {
  int mrc_l = 2;
  double snr_db = 0.0;
  double kappa = kDefaultKappa;
  std::optional<int> n_ports;
  std::optional<double> size_wl;
  std::string sweep_n;
  std::string kappa_sweep;
  double anchor_w = 0.0;
  int n_max = 100000;
  std::uint64_t seed = 42;
  std::string out;
};

json answer_json(const DesignAnswer& a) {
  json j{{"feasible", a.feasible}, {"value", nullptr}, {"guard", guard_name(a.guard)},
         {"guard_report", a.guard_report}};
  if (a.value) j["value"] = *a.value;
  if (a.mu_star) j["mu_star"] = *a.mu_star;
  if (a.worst_case_ports) j["worst_case_ports"] = *a.worst_case_ports;
  return j;
}

DesignQuery make_query(const DesignFlags& f) {
  if (!(f.kappa > 1.0)) throw UsageError("--kappa must exceed 1");
  if (f.mrc_l < 1) throw UsageError("--mrc-l must be >= 1");
  DesignQuery q;
  q.mrc_branches = f.mrc_l;
  q.snr_ratio = db_to_linear(f.snr_db);
  q.constants = bound_constants(f.kappa);
  q.n_max = f.n_max;
  q.size_wavelengths = f.size_wl;
  q.n_ports = f.n_ports;
  try {
    q.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return q;
}

int cmd_design(const DesignFlags& f) {
  DesignQuery q = make_query(f);
  Output out(f.out);
  std::ostream& os = out.stream();

  if (!f.sweep_n.empty()) {
    const std::vector<int> ns = parse_int_range(f.sweep_n);
    os << fmt::format("# fas {} design\n", kVersion);
    os << fmt::format("# config mrc_l={} snr_db={} kappa={} rho={} seed={}\n", f.mrc_l, f.snr_db,
                      q.constants.kappa, q.constants.rho, f.seed);
    os << "n_ports,feasible,w_min,mu_star,worst_case_ports,guard\n";
    for (int n : ns) {
      if (n < 1) throw UsageError("--sweep-n values must be >= 1");
      q.n_ports = n;
      const DesignAnswer a = min_size(q);
      os << fmt::format("{},{},{},{},{},{}\n", n, a.feasible ? 1 : 0, opt(a.value), opt(a.mu_star),
                        a.worst_case_ports ? fmt::format("{}", *a.worst_case_ports) : "", guard_name(a.guard));
    }
    return kExitOk;
  }

  if (f.n_ports.has_value() == f.size_wl.has_value() && f.kappa_sweep.empty()) {
    throw UsageError("design needs exactly one of --n-ports, --size-wl (or --sweep-n)");
  }
  json doc;
  doc["config"] = {{"mrc_l", f.mrc_l},   {"snr_db", f.snr_db},   {"snr_ratio", q.snr_ratio},
                   {"kappa", f.kappa},   {"rho", q.constants.rho}, {"n_max", f.n_max},
                   {"seed", f.seed},     {"target_ratio", q.target_ratio()}};
  json results = json::object();
  json guards = json::array();
  auto note = [&](const DesignAnswer& a) {
    if (!a.feasible) guards.push_back({{"guard", guard_name(a.guard)}, {"report", a.guard_report}});
  };

  if (f.size_wl) {
    doc["config"]["size_wl"] = *f.size_wl;
    const DesignAnswer a = min_ports_for_size(q);
    results["min_ports"] = answer_json(a);
    note(a);
  }
  if (f.n_ports) {
    doc["config"]["n_ports"] = *f.n_ports;
    const DesignAnswer a = min_size(q);
    results["min_size"] = answer_json(a);
    note(a);
    const RequiredCorrelation rc = required_mu_and_size(q);
    json r{{"feasible", rc.feasible}, {"guard", guard_name(rc.guard)}};
    if (rc.feasible) {
      r["mu_star"] = rc.mu_star;
      r["d_star_wl"] = rc.d_star_wavelengths;
    }
    results["required_correlation"] = r;
    if (!a.feasible) {
      const DesignAnswer first = first_feasible_size_ports(q);
      results["first_feasible_n_ports"] = answer_json(first);
    }
  }
  if (!f.kappa_sweep.empty()) {
    if (!f.n_ports) throw UsageError("--kappa-sweep needs --n-ports");
    if (!(f.anchor_w > 0.0)) throw UsageError("--kappa-sweep needs a positive --anchor-w");
    std::vector<double> kappas = parse_range(f.kappa_sweep);
    for (double k : kappas) {
      if (!(k > 1.0)) throw UsageError("--kappa-sweep values must exceed 1");
    }
    const KappaSweep ks = kappa_sweep(q, kappas, f.anchor_w);
    json pts = json::array();
    for (const KappaSweepPoint& p : ks.points) {
      pts.push_back({{"kappa", p.kappa}, {"w_min", p.w_min ? json(*p.w_min) : json(nullptr)}});
    }
    results["kappa_sweep"] = {{"anchor_w", f.anchor_w},
                              {"points", pts},
                              {"best_kappa", ks.best_kappa ? json(*ks.best_kappa) : json(nullptr)},
                              {"anchor_reproduced", ks.anchor_reproduced}};
  }
  doc["results"] = results;
  doc["guards"] = guards;
  doc["version"] = kVersion;
  os << doc.dump(2) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- envelope ----

struct EnvelopeFlags {
  int n_ports = 100;
  double size_wl = 2.0;
  double speed_kmh = 30.0;
  double carrier_ghz = 5.0;
  std::int64_t samples = 10000;
  double sample_rate = 1.0e4;
  int scatterers = 64;
  int mrc_l = 2;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_envelope(const EnvelopeFlags& f) {
  if (f.samples < 1) throw UsageError("--samples must be >= 1");
  const FasConfig cfg{f.n_ports, f.size_wl, 1.0};
  DopplerTraceConfig d;
  d.speed_mps = f.speed_kmh / 3.6;
  d.carrier_hz = f.carrier_ghz * 1e9;
  d.sample_rate_hz = f.sample_rate;
  d.duration_s = static_cast<double>(f.samples) / f.sample_rate;
  d.n_scatterers = f.scatterers;
  d.mrc_branches = f.mrc_l;
  try {
    cfg.validate();
    d.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  RandomStream rng(f.seed, 0);
  const EnvelopeTrace trace = envelope_trace(cfg, d, rng);
  const TraceStatistics st = trace_statistics(trace);
  Output out(f.out);
  std::ostream& os = out.stream();
  os << fmt::format("# fas {} envelope\n", kVersion);
  os << fmt::format("# config n_ports={} size_wl={} speed_kmh={} carrier_ghz={} samples={} sample_rate={} "
                    "scatterers={} mrc_l={} seed={}\n",
                    f.n_ports, f.size_wl, f.speed_kmh, f.carrier_ghz, f.samples, f.sample_rate, f.scatterers,
                    f.mrc_l, f.seed);
  os << fmt::format("# stats spread_ge_30db_fraction={} max_spread_db={} fas_variance_db={} "
                    "min_port_variance_db={}\n",
                    st.spread_fraction, st.max_spread_db, st.fas_variance_db, st.min_port_variance_db);
  trace.write_csv(os);
  return kExitOk;
}

// -------------------------------------------------------------- validate ----

struct ValidateFlags {
  std::string preset = "default";
  std::optional<std::int64_t> trials;
  std::uint64_t seed = 42;
  int workers = 1;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::string out;
};

int cmd_validate(const ValidateFlags& f) {
  ValidationOptions o;
  o.preset = f.preset == "quick" ? GridPreset::quick : GridPreset::standard;
  o.trials = f.trials.value_or(o.preset == GridPreset::quick ? 100'000 : 1'000'000);
  o.seed = f.seed;
  o.workers = f.workers;
  if (f.abs_tol) o.quadrature.abs_tol = *f.abs_tol;
  if (f.rel_tol) o.quadrature.rel_tol = *f.rel_tol;
  try {
    o.quadrature.validate();
    McSettings{o.trials, o.seed, o.workers}.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const ValidationReport report = run_validation(o);
  Output out(f.out);
  out.stream() << report.to_json();
  return report.passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage analysis for fluid antenna systems"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SweepFlags curve;
  auto* c_curve = app.add_subcommand("outage-curve", "exact, approximate and bounded outage over a sweep");
  add_sweep_flags(c_curve, curve);

  SweepFlags compare;
  auto* c_compare = app.add_subcommand("bounds-compare", "outage sweep against L-branch MRC levels");
  add_sweep_flags(c_compare, compare);
  c_compare->add_option("--mrc-l", compare.mrc_l, "MRC branch counts")->delimiter(',')->capture_default_str();

  DesignFlags design;
  auto* c_design = app.add_subcommand("design", "minimum ports or size to beat L-branch MRC");
  c_design->add_option("--mrc-l", design.mrc_l, "MRC branch count L")->capture_default_str();
  c_design->add_option("--snr-db", design.snr_db, "threshold over mean SNR, dB")->capture_default_str();
  c_design->add_option("--kappa", design.kappa, "bound constant kappa > 1")->capture_default_str();
  c_design->add_option("--n-ports", design.n_ports, "number of ports N (solve for W)");
  c_design->add_option("--size-wl", design.size_wl, "size W in wavelengths (solve for N)");
  c_design->add_option("--sweep-n", design.sweep_n, "(N, W_min) frontier as CSV over start:stop:step");
  c_design->add_option("--kappa-sweep", design.kappa_sweep, "kappa values start:stop:step");
  c_design->add_option("--anchor-w", design.anchor_w, "expected W for the kappa sweep");
  c_design->add_option("--n-max", design.n_max, "largest N searched")->capture_default_str();
  c_design->add_option("--seed", design.seed, "unused by the closed-form rules")->capture_default_str();
  c_design->add_option("--out", design.out, "output file (default stdout)");

  EnvelopeFlags env;
  auto* c_env = app.add_subcommand("envelope", "time trace of port, FAS and MRC envelopes");
  c_env->add_option("--n-ports", env.n_ports, "number of ports N")->capture_default_str();
  c_env->add_option("--size-wl", env.size_wl, "size W in wavelengths")->capture_default_str();
  c_env->add_option("--speed-kmh", env.speed_kmh, "terminal speed, km/h")->capture_default_str();
  c_env->add_option("--carrier-ghz", env.carrier_ghz, "carrier frequency, GHz")->capture_default_str();
  c_env->add_option("--samples", env.samples, "number of samples")->capture_default_str();
  c_env->add_option("--sample-rate", env.sample_rate, "samples per second")->capture_default_str();
  c_env->add_option("--scatterers", env.scatterers, "sinusoids per Gaussian process")->capture_default_str();
  c_env->add_option("--mrc-l", env.mrc_l, "MRC branch count L")->capture_default_str();
  c_env->add_option("--seed", env.seed, "random seed")->capture_default_str();
  c_env->add_option("--out", env.out, "output file (default stdout)");

  ValidateFlags val;
  auto* c_val = app.add_subcommand("validate", "run the invariant suite and print a JSON report");
  c_val->add_option("--preset", val.preset, "grid preset")
      ->check(CLI::IsMember({"default", "quick"}))
      ->capture_default_str();
  c_val->add_option("--trials", val.trials, "Monte-Carlo trials per configuration");
  c_val->add_option("--seed", val.seed, "random seed")->capture_default_str();
  c_val->add_option("--workers", val.workers, "Monte-Carlo worker threads")->capture_default_str();
  c_val->add_option("--abs-tol", val.abs_tol, "absolute quadrature tolerance");
  c_val->add_option("--rel-tol", val.rel_tol, "relative quadrature tolerance");
  c_val->add_option("--out", val.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_curve) return cmd_outage_curve(curve);
    if (*c_compare) return cmd_bounds_compare(compare);
    if (*c_design) return cmd_design(design);
    if (*c_env) return cmd_envelope(env);
    if (*c_val) return cmd_validate(val);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstantsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
