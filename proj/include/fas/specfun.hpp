// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <stdexcept>

namespace fas::specfun {

/// Raised for arguments outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Arguments of the first-order Marcum Q-function. Both must be finite and
/// nonnegative; the constructor enforces it.
class MarcumArgs {
 public:
  MarcumArgs(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double a_;
  double b_;
};

struct EnvelopeInverseResult {
  double epsilon_star = 0.0;
  bool achieved = false;
};

// Tunables. The defaults reproduce the documented accuracy; tests may tighten
// them but nothing in the library changes them at runtime.
struct Tolerances {
  // Above this value of a*b the Marcum Q-function switches from the scaled
  // Bessel series to its integral representation.
  double marcum_series_limit = 1.0e3;
  // Absolute tolerance on the returned argument of the J0 envelope inverse.
  double envelope_inverse_tol = 1.0e-12;
  // Largest argument the envelope inverse will search before giving up.
  double envelope_inverse_max = 1.0e12;
};

const Tolerances& default_tolerances();

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);
/// Bessel function of the first kind, order one.
double bessel_j1(double x);

/// Exponentially scaled modified Bessel function e^{-x} I0(x) for x >= 0.
double bessel_i0_scaled(double x);

/// First-order Marcum Q-function
///   Q1(a, b) = \int_b^\infty t exp(-(t^2 + a^2)/2) I0(a t) dt.
/// Q1(a, 0) = 1 and Q1(0, b) = exp(-b^2/2) hold exactly.
double marcum_q1(const MarcumArgs& args);
double marcum_q1(double a, double b);

/// Q1(alpha, beta) - Q1(beta, alpha). Antisymmetric; zero on the diagonal.
double delta_q1(double alpha, double beta);

/// Complementary standard normal cdf.
double gaussian_q(double x);

/// Smallest eps >= 0 such that |J0(e)| <= target for every e >= eps.
/// J0 oscillates, so this is an inverse of its decaying envelope rather than
/// of J0 itself. Requires 0 < target; targets >= 1 return 0.
EnvelopeInverseResult inv_besselj0_envelope(double target,
                                            const Tolerances& tol = default_tolerances());

}  // namespace fas::specfun
