// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Symmetric random noise models and the Gaussian-mechanism scale. All
// randomness flows through a counter-based SplitMix64 stream so that a
// (seed, level, trial) triple reproduces a draw bit-exactly on any platform.

#ifndef SPECBOUND_NOISE_HPP
#define SPECBOUND_NOISE_HPP

#include <cstdint>

#include "specbound/linalg.hpp"

namespace specbound {

// SplitMix64 with a hand-rolled Box-Muller transform. The standard library
// distributions are implementation-defined, which would break cross-platform
// reproducibility of reports.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double next_unit();      // uniform in [0, 1), 53-bit resolution
  double next_gaussian();  // standard normal

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives a child seed for stream index `index`. fold(fold(seed, level),
// trial) gives every (level, trial) cell its own independent stream.
std::uint64_t fold_seed(std::uint64_t seed, std::uint64_t index);

struct NoiseSpec {
  enum class Kind { kWignerGaussian, kRademacher };

  Kind kind = Kind::kWignerGaussian;
  double scale = 1.0;  // multiplies every entry; must be >= 0
  std::uint64_t seed = 0;
  // Doubles the diagonal variance of the Gaussian ensemble (the orthogonally
  // invariant convention). Off by default: unit variance everywhere.
  bool goe_diagonal = false;
};

// Symmetric matrix with i.i.d. N(0, scale^2) entries on and above the
// diagonal (diagonal variance doubled when goe_diagonal is set), mirrored
// below. Entries are drawn in row-major upper-triangle order.
SymMatrix sample_wigner(int n, const NoiseSpec& spec);

// Same layout with independent uniform +/-scale entries.
SymMatrix sample_rademacher(int n, const NoiseSpec& spec);

// Dispatch on spec.kind.
SymMatrix sample_noise(int n, const NoiseSpec& spec);

// Per-entry standard deviation sigma = sensitivity * sqrt(2 ln(1.25/delta))
// / epsilon for (epsilon, delta)-differential privacy of a symmetric
// release with L2 sensitivity `sensitivity`.
double gaussian_mechanism_sigma(double epsilon, double delta,
                                double sensitivity);

}  // namespace specbound

#endif  // SPECBOUND_NOISE_HPP
