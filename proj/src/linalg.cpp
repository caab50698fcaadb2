// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace specbound {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kMultipletTol = 1e-10;

double multiplet_tol(const Spectrum& s) {
  return kMultipletTol * std::max(1.0, s.source_norm);
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) : m_(m) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw std::invalid_argument("SymMatrix requires a square matrix, n >= 1");
  }
  for (int i = 0; i < m_.rows(); ++i) {
    for (int j = i + 1; j < m_.cols(); ++j) {
      m_(j, i) = m_(i, j);
    }
  }
}

SymMatrix SymMatrix::identity(int n) {
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& values) {
  Eigen::MatrixXd m = values.asDiagonal();
  return SymMatrix(m);
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() + b.mat());
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() - b.mat());
}

SymMatrix operator*(double c, const SymMatrix& a) {
  return SymMatrix(c * a.mat());
}

EntireFn::EntireFn(Kind kind, int power, std::vector<double> coeffs,
                   std::string name)
    : kind_(kind), power_(power), coeffs_(std::move(coeffs)),
      name_(std::move(name)) {}

EntireFn EntireFn::power(int k) {
  if (k < 0) throw std::invalid_argument("power exponent must be >= 0");
  std::string name = k == 0 ? "1" : (k == 1 ? "z" : "z^" + std::to_string(k));
  return EntireFn(Kind::kPower, k, {}, std::move(name));
}

EntireFn EntireFn::exp() { return EntireFn(Kind::kExp, 0, {}, "exp"); }
EntireFn EntireFn::cos() { return EntireFn(Kind::kCos, 0, {}, "cos"); }
EntireFn EntireFn::sin() { return EntireFn(Kind::kSin, 0, {}, "sin"); }

EntireFn EntireFn::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs coefficients");
  std::ostringstream name;
  name << "poly(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) name << ",";
    name << coeffs[i];
  }
  name << ")";
  return EntireFn(Kind::kPoly, 0, std::move(coeffs), name.str());
}

std::complex<double> EntireFn::operator()(std::complex<double> z) const {
  switch (kind_) {
    case Kind::kPower: {
      std::complex<double> w(1.0, 0.0);
      for (int i = 0; i < power_; ++i) w *= z;
      return w;
    }
    case Kind::kExp: return std::exp(z);
    case Kind::kCos: return std::cos(z);
    case Kind::kSin: return std::sin(z);
    case Kind::kPoly: {
      std::complex<double> w(0.0, 0.0);
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        w = w * z + *it;
      }
      return w;
    }
  }
  return {};
}

double EntireFn::operator()(double x) const {
  switch (kind_) {
    case Kind::kPower: {
      double w = 1.0;
      for (int i = 0; i < power_; ++i) w *= x;
      return w;
    }
    case Kind::kExp: return std::exp(x);
    case Kind::kCos: return std::cos(x);
    case Kind::kSin: return std::sin(x);
    case Kind::kPoly: {
      double w = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        w = w * x + *it;
      }
      return w;
    }
  }
  return 0.0;
}

const std::vector<EntireFn>& default_registry() {
  static const std::vector<EntireFn> fns = {
      EntireFn::power(0), EntireFn::power(1), EntireFn::power(2),
      EntireFn::power(3), EntireFn::exp()};
  return fns;
}

Spectrum eig_sym(const SymMatrix& a) {
  const int n = a.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw numeric_error("symmetric eigendecomposition failed to converge");
  }

  Spectrum s;
  s.values = solver.eigenvalues().reverse();
  s.vectors = solver.eigenvectors().rowwise().reverse();
  s.source_norm = std::max(std::abs(s.values(0)), std::abs(s.values(n - 1)));

  for (int j = 0; j < n; ++j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      double v = std::abs(s.vectors(i, j));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (s.vectors(arg, j) < 0.0) s.vectors.col(j) = -s.vectors.col(j);
  }

  const double ortho =
      (s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (ortho > kOrthoTol) {
    throw numeric_error("eigenvector columns lost orthonormality");
  }
  const Eigen::MatrixXd residual =
      a.mat() * s.vectors - s.vectors * s.values.asDiagonal();
  const double res_tol = kResidualTol * std::max(1.0, s.source_norm);
  if (residual.colwise().norm().maxCoeff() > res_tol) {
    throw numeric_error("eigenpair residual exceeds tolerance");
  }
  return s;
}

std::vector<int> selection_order(const Spectrum& s) {
  std::vector<int> order(s.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const double ai = std::abs(s.values(i));
    const double aj = std::abs(s.values(j));
    if (ai != aj) return ai > aj;
    // Equal magnitude: the positive member wins; equal values keep index
    // order via stability.
    return s.values(i) > s.values(j);
  });
  return order;
}

Eigen::VectorXd singular_values(const Spectrum& s) {
  Eigen::VectorXd sv = s.values.cwiseAbs();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  return sv;
}

SymMatrix rank_p_approx(const Spectrum& s, int p) {
  const int n = s.n();
  if (p < 0 || p > n) {
    throw std::invalid_argument("rank_p_approx: p out of [0, n]");
  }
  const std::vector<int> order = selection_order(s);
  if (p >= 1 && p < n) {
    const double sel = s.values(order[p - 1]);
    const double exc = s.values(order[p]);
    if (std::abs(sel - exc) <= multiplet_tol(s)) {
      throw numeric_error("selection splits eigenvalue multiplet");
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < p; ++i) {
    const int idx = order[i];
    out += s.values(idx) * s.vectors.col(idx) * s.vectors.col(idx).transpose();
  }
  return SymMatrix(out);
}

int split_index_k(const Spectrum& s, int p) {
  const int n = s.n();
  if (p < 0 || p > n) {
    throw std::invalid_argument("split_index_k: p out of [0, n]");
  }
  const std::vector<int> order = selection_order(s);
  int k = 0;
  for (int i = 0; i < p; ++i) {
    if (s.values(order[i]) > 0.0) ++k;
  }
  return k;
}

SymMatrix f_p_approx(const Spectrum& s, const EntireFn& f, int p) {
  const int n = s.n();
  if (p < 0 || p > n) {
    throw std::invalid_argument("f_p_approx: p out of [0, n]");
  }
  if (p >= 1 && p < n &&
      std::abs(s.values(p - 1) - s.values(p)) <= multiplet_tol(s)) {
    throw numeric_error("selection splits eigenvalue multiplet");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < p; ++i) {
    out += f(s.values(i)) * s.vectors.col(i) * s.vectors.col(i).transpose();
  }
  return SymMatrix(out);
}

double spectral_norm(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("spectral norm eigensolve failed");
  }
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double frobenius_norm(const SymMatrix& m) { return m.mat().norm(); }

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("spectral norm eigensolve failed");
  }
  const double top = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

}  // namespace specbound
