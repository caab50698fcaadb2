// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Symmetric eigendecomposition, rank-p spectral truncation, and entire
// test functions. Everything downstream (bounds, contours, experiments)
// consumes the Spectrum type defined here.

#ifndef SPECBOUND_LINALG_HPP
#define SPECBOUND_LINALG_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specbound/errors.hpp"

namespace specbound {

// Dense real symmetric matrix. Construction mirrors the upper triangle
// so the symmetry invariant holds bit-exactly.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);
  explicit SymMatrix(int n) : m_(Eigen::MatrixXd::Zero(n, n)) {}

  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Eigen::VectorXd& values);

  int n() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

// Eigendecomposition A = U diag(values) U^T with values sorted descending,
// plus the cached spectral norm of the source matrix.
struct Spectrum {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns, column i pairs values[i]
  double source_norm = 0.0; // max |values[i]|

  int n() const { return static_cast<int>(values.size()); }
};

// Entire functions used by the functional bounds and contour integrals.
class EntireFn {
 public:
  static EntireFn power(int k);
  static EntireFn exp();
  static EntireFn cos();
  static EntireFn sin();
  static EntireFn polynomial(std::vector<double> coeffs);  // c0 + c1 z + ...

  std::complex<double> operator()(std::complex<double> z) const;
  double operator()(double x) const;
  const std::string& name() const { return name_; }

 private:
  enum class Kind { kPower, kExp, kCos, kSin, kPoly };
  EntireFn(Kind kind, int power, std::vector<double> coeffs, std::string name);

  Kind kind_;
  int power_ = 0;
  std::vector<double> coeffs_;
  std::string name_;
};

// The function set exercised by the contour validation suites: 1, z, z^2,
// z^3, exp.
const std::vector<EntireFn>& default_registry();

// Decompose a symmetric matrix. Guarantees on the result:
//   - values descending, paired with orthonormal vectors (1e-10),
//   - residual ||A u_i - lambda_i u_i|| <= 1e-8 * max(1, ||A||) per column,
//   - deterministic sign: each column's largest-magnitude entry is positive
//     (first such entry on ties).
Spectrum eig_sym(const SymMatrix& a);

// Indices 0..n-1 ordered by the truncation selection rule: descending
// |lambda|, ties preferring the positive eigenvalue, then the smaller index.
std::vector<int> selection_order(const Spectrum& s);

// |lambda| sorted descending (the singular values of the source matrix).
Eigen::VectorXd singular_values(const Spectrum& s);

// Best rank-p approximation in the spectral norm: keep the p eigenvalues of
// largest magnitude. Throws invalid_argument for p out of [0, n]; throws
// numeric_error if the cut splits a multiplet (|lambda_sel - lambda_excl|
// <= 1e-10 * max(1, ||A||) for the boundary pair).
SymMatrix rank_p_approx(const Spectrum& s, int p);

// Number of positive eigenvalues among the p selected by rank_p_approx.
int split_index_k(const Spectrum& s, int p);

// Spectral truncation of f(A): apply f to the top p eigenvalues by value
// (descending), zero elsewhere. Multiplet guard as in rank_p_approx but on
// the value ordering.
SymMatrix f_p_approx(const Spectrum& s, const EntireFn& f, int p);

double spectral_norm(const SymMatrix& m);
double frobenius_norm(const SymMatrix& m);

// ||M||_2 = sqrt(lambda_max(M^* M)) for complex rectangular M.
double spectral_norm(const Eigen::MatrixXcd& m);

}  // namespace specbound

#endif  // SPECBOUND_LINALG_HPP
