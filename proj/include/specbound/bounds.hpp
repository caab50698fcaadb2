// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECBOUND_BOUNDS_HPP_
#define SPECBOUND_BOUNDS_HPP_

#include <optional>

#include "specbound/contour.hpp"
#include "specbound/linalg.hpp"

namespace specbound {

// Structural quantities of a spectrum/noise pair that the perturbation bounds
// consume.  Cluster fields are optional: delta_k/lambda_k/r1/x1 exist only
// when the selection contains a positive eigenvalue (k >= 1), and
// delta_bottom/lambda_bottom/r2/x2 only when it contains a non-positive one
// (p > k).  At least one side is always present for p >= 1.
struct GapProfile {
  int n = 0;
  int p = 0;
  int k = 0;       // positive eigenvalues among the p selected
  bool psd = false;

  double lambda_p = 0.0;      // p-th largest eigenvalue
  double delta_p = 0.0;       // lambda_p - lambda_{p+1}
  double sigma1 = 0.0;        // spectral norm of the source matrix
  double sigma_p1 = 0.0;      // (p+1)-st singular value
  double sigma_gap = 0.0;     // sigma_p - sigma_{p+1}

  std::optional<double> lambda_k;      // smallest selected positive eigenvalue
  std::optional<double> delta_k;       // gap below the positive cluster
  std::optional<double> lambda_bottom; // largest selected non-positive eigenvalue
  std::optional<double> delta_bottom;  // gap above the bottom cluster

  // Halving radii: r is the least count of leading eigenvalues whose
  // successor has dropped to half of lambda_p (convention lambda_{n+1} = 0,
  // capped at n when the spectrum never decays that far).  r1 is the same
  // radius measured from lambda_k, r2 the mirrored radius from the bottom.
  int r = 0;
  std::optional<int> r1;
  std::optional<int> r2;

  // Largest eigenvector interaction |u_i^T E u_j| over the corresponding
  // radius block; x_bar is the max of the present cluster interactions.
  double x = 0.0;
  std::optional<double> x1;
  std::optional<double> x2;
  double x_bar = 0.0;
};

// Computes the profile for selecting p of n eigenvalues under noise e.
// Requires 1 <= p <= n-1 so that delta_p exists.
GapProfile gap_profile(const Spectrum& s, const SymMatrix& e, int p);

// Gap preconditions under which the corresponding bounds are proved.
bool gap_ok_psd(const GapProfile& gp, double e_norm);  // 4 e <= delta_p
bool gap_ok_sym(const GapProfile& gp, double e_norm);  // 4 e <= cluster gaps
bool sv_gap_ok(const GapProfile& gp, double e_norm);   // 2 e < sigma gap
// Release gap certificate: delta_p clears 8.01 * sigma_noise * sqrt(n).
bool dp_gap_ok(const GapProfile& gp, double noise_sigma);

// Assumption-free baseline 2 (sigma_{p+1} + e).
double eym_bound(const Spectrum& s, double e_norm, int p);

// Gap-only PSD bound 7 e lambda_p / delta_p.
double psd_gap_bound(const Spectrum& s, double e_norm, int p);

// Interaction-aware PSD bound
//   12 (e log(10 sigma1/delta_p) + r^2 x lambda_p/delta_p
//       + r^2 x log(10 sigma1/delta_p)).
double psd_interaction_bound(const GapProfile& gp, double e_norm);

// Gap-only symmetric bound: 6 e times the sum of log(6 sigma1/gap) +
// |cluster edge|/gap over the present clusters.
double sym_gap_bound(const GapProfile& gp, double e_norm);

// Interaction-aware symmetric bound with radius rr = max of the present
// cluster radii:
//   12 (e + rr^2 x_bar) * [cluster logs] + 30 rr^2 x_bar * [cluster tails].
double sym_interaction_bound(const GapProfile& gp, double e_norm);

// Bound for entire functions of the matrix: 4 max_{contour} |f| e / delta_p.
// Uses the top-cluster rectangle, so it requires a positive lambda_1.
double functional_bound(const Spectrum& s, double e_norm, int p,
                        const EntireFn& f);

// Eigenvalue and singular value stability: every |tilde - original| must be
// within e_norm plus a small relative slack.
bool weyl_check(const Spectrum& s, const Spectrum& st, double e_norm);

// Certified cap on the near-wall second-order segment integral:
//   r1^2 x1 (2 pi |x0|/delta_k + 2 log(3 T/delta_k))
//     + (20 + 4 pi/log 10) e log(10 sigma1/delta_k).
double second_order_near_wall_bound(const GapProfile& gp, double e_norm,
                                    const RectContour& c);

// Everything a study trial reports about one (matrix, noise) draw.  Bounds
// that require preconditions the instance does not meet stay empty.
struct BoundReport {
  GapProfile profile;
  double e_norm = 0.0;
  double eym = 0.0;
  std::optional<double> psd_gap;
  std::optional<double> psd_interaction;
  std::optional<double> sym_gap;
  std::optional<double> sym_interaction;
  std::optional<double> functional;
  std::optional<double> actual_error;  // needs the perturbed spectrum
  bool gap_ok_psd = false;
  bool gap_ok_sym = false;
  bool sv_gap_ok = false;
  bool weyl_ok = true;
  std::optional<bool> dp_gap_ok;  // set by the release path only
};

// Assembles the applicable bounds for one draw.  When the perturbed spectrum
// is supplied the actual rank-p error and the stability check are filled in.
BoundReport make_bound_report(const Spectrum& s, const SymMatrix& e, int p,
                              const Spectrum* perturbed = nullptr,
                              const EntireFn* f = nullptr);

}  // namespace specbound

#endif  // SPECBOUND_BOUNDS_HPP_
