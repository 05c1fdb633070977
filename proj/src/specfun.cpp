// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#include "fas/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fas/quadrature.hpp"

namespace fas::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 8.0;
constexpr double kMillerLimit = 30.0;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": argument must be finite");
}

// Ascending series for J0 and J1, evaluated in extended precision so the
// alternating cancellation up to |x| = 8 stays below double round-off.
void ascending_j01(double x, double& j0, double& j1) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double t0 = 1.0L, s0 = 1.0L;
  long double t1 = 1.0L, s1 = 1.0L;
  for (int k = 1; k < 60; ++k) {
    t0 *= q / (static_cast<long double>(k) * k);
    t1 *= q / (static_cast<long double>(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (std::fabs(t0) < 1e-21L * std::fabs(s0) && std::fabs(t1) < 1e-21L) break;
  }
  j0 = static_cast<double>(s0);
  j1 = static_cast<double>(0.5L * x * s1);
}

// Miller backward recurrence normalised by J0 + 2 sum J_{2k} = 1.
void miller_j01(double x, double& j0, double& j1) {
  const long double ax = std::fabs(x);
  int start = static_cast<int>(ax + 40.0L + 10.0L * std::sqrt(ax));
  if (start % 2 == 1) ++start;
  long double above = 0.0L, cur = 1.0e-30L, norm = 0.0L;
  long double r0 = 0.0L, r1 = 0.0L;
  for (int k = start; k >= 1; --k) {
    const long double below = (2.0L * k / ax) * cur - above;
    above = cur;
    cur = below;  // now J_{k-1}
    if (k - 1 == 1) r1 = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * cur;
    if (std::fabs(cur) > 1.0e250L) {
      cur *= 1.0e-250L;
      above *= 1.0e-250L;
      norm *= 1.0e-250L;
      r1 *= 1.0e-250L;
    }
  }
  r0 = cur;
  norm += r0;
  j0 = static_cast<double>(r0 / norm);
  j1 = static_cast<double>(r1 / norm);
  if (x < 0) j1 = -j1;
}

// Hankel asymptotic expansion J_nu(x) = sqrt(2/(pi x)) (P cos w - Q sin w).
void hankel_pq(double nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag > prev) break;
    prev = mag;
    // Even k feeds P with sign (-1)^{k/2}; odd k feeds Q with sign (-1)^{(k-1)/2}.
    if (k % 2 == 0) {
      p += (k % 4 == 0) ? term : -term;
    } else {
      q += ((k - 1) % 4 == 0) ? term : -term;
    }
    if (mag < 1e-18) break;
  }
}

void asymptotic_j01(double x, double& j0, double& j1) {
  const double ax = std::fabs(x);
  const double c = std::cos(ax);
  const double s = std::sin(ax);
  const double amp = std::sqrt(2.0 / (kPi * ax)) / std::numbers::sqrt2;
  double p, q;
  hankel_pq(0.0, ax, p, q);
  // w = x - pi/4
  j0 = amp * (p * (c + s) - q * (s - c));
  hankel_pq(1.0, ax, p, q);
  // w = x - 3 pi/4
  j1 = amp * (p * (s - c) + q * (s + c));
  if (x < 0) j1 = -j1;
}

void bessel_j01(double x, double& j0, double& j1) {
  const double ax = std::fabs(x);
  if (ax <= kSeriesLimit) {
    ascending_j01(x, j0, j1);
  } else if (ax <= kMillerLimit) {
    miller_j01(x, j0, j1);
  } else {
    asymptotic_j01(x, j0, j1);
  }
}

// Ratios I_k(z) / I_{k-1}(z) for k = 1..n by backward continued-fraction
// recurrence, started far enough above n to have converged.
std::vector<double> bessel_i_ratios(double z, int n) {
  const int start = n + 40 + static_cast<int>(10.0 * std::sqrt(z));
  std::vector<double> ratio(static_cast<std::size_t>(n) + 1, 0.0);
  double r = 0.0;
  for (int k = start; k >= 1; --k) {
    r = 1.0 / (2.0 * k / z + r);
    if (k <= n) ratio[static_cast<std::size_t>(k)] = r;
  }
  return ratio;
}

int series_terms(double z) { return 30 + static_cast<int>(9.0 * std::sqrt(z) + 0.5 * z / (1.0 + z)); }

// sum_{k >= first} rho^k e^{-z} I_k(z), rho <= 1.
double scaled_bessel_i_sum(double z, double rho, int first) {
  const int n = series_terms(z);
  const std::vector<double> ratio = bessel_i_ratios(z, n);
  double term = bessel_i0_scaled(z);
  double sum = first == 0 ? term : 0.0;
  for (int k = 1; k <= n; ++k) {
    term *= rho * ratio[static_cast<std::size_t>(k)];
    if (k >= first) sum += term;
    if (term < 1e-18 * sum || term == 0.0) break;
  }
  return sum;
}

// Q1 via the integral representation with the scaled Bessel kernel; used when
// a*b is too large for the series to be economical.
double marcum_q1_integral(double a, double b) {
  auto kernel = [a](double t) {
    const double d = t - a;
    return t * std::exp(-0.5 * d * d) * bessel_i0_scaled(a * t);
  };
  QuadratureSettings q;
  q.abs_tol = 1e-16;
  q.rel_tol = 1e-13;
  q.max_subdivisions = 4000;
  constexpr double kSpan = 40.0;
  if (b > a) {
    return integrate(kernel, b, b + kSpan, q).value;
  }
  const double lo = std::max(0.0, b - kSpan);
  return 1.0 - integrate(kernel, lo, b, q).value;
}

}  // namespace

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

MarcumArgs::MarcumArgs(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw DomainError("marcum_q1: arguments must be finite and nonnegative");
  }
}

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  double j0, j1;
  bessel_j01(x, j0, j1);
  return j0;
}

double bessel_j1(double x) {
  require_finite(x, "bessel_j1");
  double j0, j1;
  bessel_j01(x, j0, j1);
  return j1;
}

double bessel_i0_scaled(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("bessel_i0_scaled: argument must be >= 0");
  if (std::isinf(x)) return 0.0;
  if (x <= 30.0) {
    const long double q = 0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<long double>(k) * k);
      sum += term;
      if (term < 1e-21L * sum) break;
    }
    return static_cast<double>(sum * std::exp(-static_cast<long double>(x)));
  }
  // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double marcum_q1(const MarcumArgs& args) {
  const double a = args.a();
  const double b = args.b();
  if (b == 0.0) return 1.0;
  if (a == 0.0) return std::exp(-0.5 * b * b);
  const double z = a * b;
  if (a == b) return 0.5 * (1.0 + bessel_i0_scaled(z));
  if (z > default_tolerances().marcum_series_limit) return marcum_q1_integral(a, b);
  const double d = b - a;
  const double weight = std::exp(-0.5 * d * d);
  if (a < b) {
    // Q1 = e^{-(a^2+b^2)/2} sum_{k>=0} (a/b)^k I_k(ab)
    return std::min(1.0, weight * scaled_bessel_i_sum(z, a / b, 0));
  }
  // Q1 = 1 - e^{-(a^2+b^2)/2} sum_{k>=1} (b/a)^k I_k(ab)
  return std::max(0.0, 1.0 - weight * scaled_bessel_i_sum(z, b / a, 1));
}

double marcum_q1(double a, double b) { return marcum_q1(MarcumArgs(a, b)); }

double delta_q1(double alpha, double beta) {
  const MarcumArgs checked(alpha, beta);
  if (alpha == beta) return 0.0;
  const double hi = std::max(alpha, beta);
  const double lo = std::min(alpha, beta);
  const double d = marcum_q1(hi, lo) - marcum_q1(lo, hi);
  return alpha > beta ? d : -d;
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

EnvelopeInverseResult inv_besselj0_envelope(double target, const Tolerances& tol) {
  if (std::isnan(target) || target <= 0.0) {
    throw DomainError("inv_besselj0_envelope: target must be positive");
  }
  if (target >= 1.0) return {0.0, true};

  // Local extrema of J0 sit at the zeros of J1. The m-th positive one lies
  // within 0.5 of McMahon's estimate (m + 1/4) pi - 3 / (8 (m + 1/4) pi).
  auto bisect = [&](auto&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double width_tol = std::max(tol.envelope_inverse_tol, 4.0 * std::numeric_limits<double>::epsilon() * hi);
      if (hi - lo <= width_tol || mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  auto extremum = [&](long long m) {
    const double beta = (static_cast<double>(m) + 0.25) * kPi;
    const double guess = beta - 3.0 / (8.0 * beta);
    return bisect([](double e) { return bessel_j1(e); }, guess - 0.5, guess + 0.5);
  };
  auto peak = [&](long long m) { return std::fabs(bessel_j0(extremum(m))); };

  // |J0| at its extrema decays like sqrt(2 / (pi e)); jump close to the answer
  // and back off until the previous lobe is above target.
  const double estimate = 2.0 / (kPi * target * target);
  if (estimate > tol.envelope_inverse_max) return {estimate, false};
  long long m = std::max(1LL, static_cast<long long>(estimate / kPi) - 4);
  long long step = 1;
  while (m > 1 && peak(m - 1) <= target) {
    m = std::max(1LL, m - step);
    step *= 2;
  }
  while (peak(m) > target) ++m;

  const double lo = m == 1 ? 0.0 : extremum(m - 1);
  const double hi = extremum(m);
  const double eps = bisect([target](double e) { return std::fabs(bessel_j0(e)) - target; }, lo, hi);
  return {eps, true};
}

}  // namespace fas::specfun
