// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random instances shared by the unit and acceptance suites.

#ifndef SPECBOUND_TESTS_SUPPORT_HPP
#define SPECBOUND_TESTS_SUPPORT_HPP

#include <cstdint>

#include "specbound/linalg.hpp"
#include "specbound/noise.hpp"

namespace specbound::testing {

// Haar-ish orthogonal matrix: QR of a Gaussian draw with the sign of R's
// diagonal folded into Q, so the result is a deterministic function of seed.
inline Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// Descending positive eigenvalues with a controlled gap after position p:
// adjacent gaps at least 0.2, the p-th gap at least 1, whole spectrum
// rescaled to lambda_1 = 2. The modest top keeps exp tame on contours whose
// walls sit at 2 * lambda_1.
inline Eigen::VectorXd random_psd_values(int n, int p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd v(n);
  double x = 0.3 + 0.5 * rng.next_unit();
  for (int i = n - 1; i >= 0; --i) {
    v(i) = x;
    const double gap =
        (i == p) ? 1.0 + 2.0 * rng.next_unit() : 0.2 + rng.next_unit();
    x += gap;
  }
  v *= 2.0 / v(0);
  return v;
}

// Q diag(values) Q^T for a seeded rotation.
inline SymMatrix rotated_from_values(const Eigen::VectorXd& values,
                                     std::uint64_t seed) {
  const int n = static_cast<int>(values.size());
  const Eigen::MatrixXd q = random_orthogonal(n, seed);
  Eigen::MatrixXd a = q * values.asDiagonal() * q.transpose();
  return SymMatrix(a);
}

}  // namespace specbound::testing

#endif  // SPECBOUND_TESTS_SUPPORT_HPP
