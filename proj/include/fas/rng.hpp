// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

#include <cstdint>
#include <random>

namespace fas {

/// Seedable random source. Independent streams are spawned from a (seed,
/// stream index) pair through std::seed_seq, so stream k of seed s is the
/// same sequence on every run regardless of how many other streams exist.
/// Normal variates use the Box-Muller transform of 53-bit uniforms, so the
/// output depends only on mt19937_64 and libm, not on the standard library's
/// distribution classes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  static RandomStream spawn(std::uint64_t seed, std::uint64_t stream) {
    return RandomStream(seed, stream);
  }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal.
  double gaussian();
  /// Zero-mean normal with variance 1/2, the per-quadrature variance of a
  /// unit-power circularly symmetric complex Gaussian.
  double half_gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fas
