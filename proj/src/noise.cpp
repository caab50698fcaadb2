// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/noise.hpp"

#include <cmath>

namespace specbound {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_spec(const NoiseSpec& spec) {
  if (!(spec.scale >= 0.0) || !std::isfinite(spec.scale)) {
    throw std::invalid_argument("noise scale must be finite and >= 0");
  }
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t fold_seed(std::uint64_t seed, std::uint64_t index) {
  return mix(seed ^ (kGolden * (index + 1)));
}

SymMatrix sample_wigner(int n, const NoiseSpec& spec) {
  if (n < 1) throw std::invalid_argument("sample_wigner: n must be >= 1");
  check_spec(spec);
  SplitMix64 rng(spec.seed);
  const double diag_scale = spec.goe_diagonal ? std::sqrt(2.0) : 1.0;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double g = rng.next_gaussian() * spec.scale;
      if (i == j) g *= diag_scale;
      e(i, j) = g;
    }
  }
  return SymMatrix(e);
}

SymMatrix sample_rademacher(int n, const NoiseSpec& spec) {
  if (n < 1) throw std::invalid_argument("sample_rademacher: n must be >= 1");
  check_spec(spec);
  SplitMix64 rng(spec.seed);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      e(i, j) = (rng.next() & 1ULL) ? spec.scale : -spec.scale;
    }
  }
  return SymMatrix(e);
}

SymMatrix sample_noise(int n, const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseSpec::Kind::kWignerGaussian: return sample_wigner(n, spec);
    case NoiseSpec::Kind::kRademacher: return sample_rademacher(n, spec);
  }
  throw std::invalid_argument("unknown noise kind");
}

double gaussian_mechanism_sigma(double epsilon, double delta,
                                double sensitivity) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw std::invalid_argument("sensitivity must be finite and > 0");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

}  // namespace specbound
