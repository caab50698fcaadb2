// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0
//
// Rectangular contours around spectral clusters, resolvent evaluation, and
// trapezoid contour quadrature with automatic doubling. These power the
// functional-calculus projector and the integral quantities used to certify
// the perturbation bounds numerically.

#ifndef SPECBOUND_CONTOUR_HPP
#define SPECBOUND_CONTOUR_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "specbound/linalg.hpp"

namespace specbound {

// Directed straight segment a -> b in the complex plane.
struct Segment {
  std::complex<double> a;
  std::complex<double> b;
};

// Axis-aligned rectangle [x0, x1] x [-T, T]. Walls are listed left, top,
// right, bottom; the listed directions (up, right, down, left) trace the
// boundary clockwise.
struct RectContour {
  double x0 = 0.0;
  double x1 = 0.0;
  double T = 0.0;

  std::array<Segment, 4> segments() const;
  double width() const { return x1 - x0; }
  double perimeter() const { return 2.0 * width() + 4.0 * T; }
};

// Composite-trapezoid quadrature control. Each segment starts at
// points_per_segment intervals; estimates are accepted once one doubling
// changes every requested output by less than rel_tol (relative to the
// larger magnitude), with at most max_doublings rounds.
struct QuadSpec {
  int points_per_segment = 16;  // >= 16
  double rel_tol = 1e-6;
  int max_doublings = 6;
};

// Contour for the top-p cluster of a matrix with lambda_1 > 0 and a positive
// gap delta_p: left wall centered in the gap, right wall and half-height at
// twice the top eigenvalue. Throws numeric_error when an eigenvalue sits
// within 1e-12 * ||A|| of a wall.
RectContour build_contour_psd(const Spectrum& s, int p);

// Contours for the two clusters of an indefinite selection: `top` encloses
// the k positive selected eigenvalues, `bottom` (present only when p > k)
// encloses the p-k most negative ones. Throws when k = 0 (no top cluster).
struct SymContours {
  RectContour top;
  std::optional<RectContour> bottom;
};
SymContours build_contours_sym(const Spectrum& s, int p);

// (zI - A)^{-1} through the eigendecomposition. Throws numeric_error when z
// is within 1e-12 * ||A|| of an eigenvalue.
Eigen::MatrixXcd resolvent(const Spectrum& s, std::complex<double> z);

// (1 / 2 pi i) * contour integral of f(z) (zI - A)^{-1} dz, traversed with
// positive orientation. Equals f applied to the enclosed eigenvalues. The
// imaginary residue is checked against rel_tol * ||result|| and discarded.
SymMatrix contour_project(const Spectrum& s, const EntireFn& f,
                          const RectContour& c, const QuadSpec& q);

// (1 / 2 pi) * arclength integral of || f(z) [ (zI-A~)^{-1} - (zI-A)^{-1} ] ||.
double perturbation_integral(const Spectrum& sa, const Spectrum& sat,
                             const EntireFn& f, const RectContour& c,
                             const QuadSpec& q);

// (1 / 2 pi) * arclength integral of || f(z) (zI-A)^{-1} E (zI-A)^{-1} ||.
double first_order_integral(const Spectrum& sa, const SymMatrix& e,
                            const EntireFn& f, const RectContour& c,
                            const QuadSpec& q);

// Both integrals for a whole function registry in one quadrature pass. The
// shared node set makes the pointwise domination behind the bootstrapping
// inequality carry over to the discrete sums.
struct BootstrapIntegrals {
  std::vector<double> perturbation;  // one per f
  std::vector<double> first_order;   // one per f
};
BootstrapIntegrals bootstrap_integrals(const Spectrum& sa, const Spectrum& sat,
                                       const SymMatrix& e,
                                       const std::vector<EntireFn>& fs,
                                       const RectContour& c, const QuadSpec& q);

// Per-wall arclength integrals, indexed left, top, right, bottom:
//   second_order[w]  = integral of || z (zI-A)^{-1} E (zI-A)^{-1} ||,
//   pole_majorant[w] = integral of |z| / min_i |z - lambda_i|^2.
struct SegmentIntegrals {
  std::array<double, 4> second_order{};
  std::array<double, 4> pole_majorant{};
};
SegmentIntegrals segment_integrals(const Spectrum& s, const SymMatrix& e,
                                   const RectContour& c, const QuadSpec& q);

// Closed-form wall bounds for the pole majorant. `near_x` / `far_x` is the
// wall abscissa, `delta` the cluster gap split by the near wall, `dist` the
// far wall's distance to the nearest eigenvalue, `width` the rectangle
// width and T its half-height.
double near_wall_pole_bound(double near_x, double delta, double T);
double far_wall_pole_bound(double far_x, double dist, double T);
double horizontal_wall_pole_bound(double width, double T);

// Quadrature of 1/(t^2 + a^2) over [-T, T] against its closed-form bound
// pi / a. Requires 0 < a <= T.
struct ArctanCheck {
  double value = 0.0;
  double bound = 0.0;
};
ArctanCheck arctan_integral_check(double a, double T, const QuadSpec& q);

// max |f| over a 1024-points-per-wall boundary grid (corners included)
// followed by one bisection refinement around the argmax.
double boundary_abs_max(const EntireFn& f, const RectContour& c);

}  // namespace specbound

#endif  // SPECBOUND_CONTOUR_HPP
