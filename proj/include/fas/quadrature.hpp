// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace fas {

struct QuadratureSettings {
  double abs_tol = 1.0e-10;
  double rel_tol = 1.0e-9;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Thrown when adaptive integration exhausts its subdivision budget. Carries
/// the best estimate and the error bound reached at that point.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate, double abs_error)
      : std::runtime_error(what), estimate_(estimate), abs_error_(abs_error) {}
  double estimate() const { return estimate_; }
  double abs_error() const { return abs_error_; }

 private:
  double estimate_;
  double abs_error_;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 abscissae).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi]. The
/// interval with the largest error estimate is bisected until the summed
/// error meets max(abs_tol, rel_tol * |value|). Empty or reversed ranges
/// give zero.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSettings& q = {}) {
  if (!(hi > lo)) return {0.0, 0.0, 0};
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, lo, hi));
  double value = heap.top().value;
  double error = heap.top().error;
  int intervals = 1;
  while (error > std::max(q.abs_tol, q.rel_tol * std::abs(value))) {
    if (intervals >= q.max_subdivisions) {
      throw NumericalError("adaptive quadrature did not converge", value, error);
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericalError("adaptive quadrature hit floating-point resolution", value, error);
    }
    const detail::Segment left = detail::gk15(f, worst.lo, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.hi);
    heap.push(left);
    heap.push(right);
    ++intervals;
    // Periodic resummation sheds drift in the running totals.
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (intervals % 64 == 0) {
      auto copy = heap;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {value, error, intervals};
}

}  // namespace fas
