// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specbound {

namespace {

constexpr double kPsdSlack = 1e-10;      // relative tolerance for PSD checks
constexpr double kWeylSlack = 1e-10;     // relative slack on value stability
constexpr double kWallMargin = 4e-12;    // keep clear of the contour pole guard
constexpr double kDpGapFactor = 8.01;

// Least r in [1, n] with lambda_{r+1} <= target / 2, taking lambda_{n+1} = 0.
// Capped at n when the spectrum never decays below half the target.
int halving_radius(const Eigen::VectorXd& values, double target) {
  const int n = static_cast<int>(values.size());
  const double half = 0.5 * target;
  for (int r = 1; r < n; ++r) {
    if (values(r) <= half) return r;
  }
  return n;
}

// Mirrored radius from the bottom edge b: least r with
// lambda_{n-r+1} - b >= |b| / 2, capped at n.
int bottom_radius(const Eigen::VectorXd& values, double b) {
  const int n = static_cast<int>(values.size());
  const double half = 0.5 * std::abs(b);
  for (int r = 1; r < n; ++r) {
    if (values(n - 1 - (r - 1)) - b >= half) return r;
  }
  return n;
}

void check_noise_norm(double e_norm) {
  if (!(e_norm >= 0.0) || !std::isfinite(e_norm)) {
    throw std::invalid_argument("noise norm must be finite and non-negative");
  }
}

double checked_log(double num, double den, const char* gap_name) {
  if (!(den > 0.0)) {
    throw numeric_error(std::string(gap_name) +
                        " vanishes; the bound divides by it");
  }
  return std::log(num / den);
}

}  // namespace

GapProfile gap_profile(const Spectrum& s, const SymMatrix& e, int p) {
  const int n = s.n();
  if (p < 1 || p >= n) {
    throw std::invalid_argument("gap_profile: no (p+1)-st eigenvalue");
  }
  if (e.n() != n) {
    throw std::invalid_argument("gap_profile: noise dimension mismatch");
  }

  GapProfile gp;
  gp.n = n;
  gp.p = p;
  gp.k = split_index_k(s, p);
  gp.psd = s.values(n - 1) >= -kPsdSlack * s.source_norm;
  gp.lambda_p = s.values(p - 1);
  gp.delta_p = s.values(p - 1) - s.values(p);
  gp.sigma1 = s.source_norm;

  const Eigen::VectorXd sv = singular_values(s);
  gp.sigma_p1 = sv(p);
  gp.sigma_gap = sv(p - 1) - sv(p);

  if (gp.k >= 1) {
    gp.lambda_k = s.values(gp.k - 1);
    gp.delta_k = s.values(gp.k - 1) - s.values(gp.k);
    gp.r1 = halving_radius(s.values, *gp.lambda_k);
  }
  if (p > gp.k) {
    const int bi = n - (p - gp.k);  // top edge of the bottom cluster
    gp.lambda_bottom = s.values(bi);
    gp.delta_bottom = s.values(bi - 1) - s.values(bi);
    gp.r2 = bottom_radius(s.values, *gp.lambda_bottom);
  }
  gp.r = halving_radius(s.values, gp.lambda_p);

  const Eigen::MatrixXd b =
      s.vectors.transpose() * e.mat() * s.vectors;
  gp.x = b.topLeftCorner(gp.r, gp.r).cwiseAbs().maxCoeff();
  if (gp.r1) {
    gp.x1 = b.topLeftCorner(*gp.r1, *gp.r1).cwiseAbs().maxCoeff();
  }
  if (gp.r2) {
    gp.x2 = b.bottomRightCorner(*gp.r2, *gp.r2).cwiseAbs().maxCoeff();
  }
  gp.x_bar = std::max(gp.x1.value_or(0.0), gp.x2.value_or(0.0));
  return gp;
}

bool gap_ok_psd(const GapProfile& gp, double e_norm) {
  return 4.0 * e_norm <= gp.delta_p;
}

bool gap_ok_sym(const GapProfile& gp, double e_norm) {
  bool ok = true;
  if (gp.delta_k) ok = ok && 4.0 * e_norm <= *gp.delta_k;
  if (gp.delta_bottom) ok = ok && 4.0 * e_norm <= *gp.delta_bottom;
  return ok;
}

bool sv_gap_ok(const GapProfile& gp, double e_norm) {
  return 2.0 * e_norm < gp.sigma_gap;
}

bool dp_gap_ok(const GapProfile& gp, double noise_sigma) {
  return gp.delta_p >= kDpGapFactor * noise_sigma * std::sqrt(double(gp.n));
}

double eym_bound(const Spectrum& s, double e_norm, int p) {
  check_noise_norm(e_norm);
  if (p < 1 || p >= s.n()) {
    throw std::invalid_argument("eym_bound: no (p+1)-st singular value");
  }
  return 2.0 * (singular_values(s)(p) + e_norm);
}

double psd_gap_bound(const Spectrum& s, double e_norm, int p) {
  check_noise_norm(e_norm);
  if (p < 1 || p >= s.n()) {
    throw std::invalid_argument("psd_gap_bound: no (p+1)-st eigenvalue");
  }
  if (s.values(s.n() - 1) < -kPsdSlack * s.source_norm) {
    throw std::invalid_argument("psd_gap_bound: spectrum is not PSD");
  }
  const double delta = s.values(p - 1) - s.values(p);
  if (!(delta > 0.0)) {
    throw numeric_error("top gap delta_p vanishes; the bound divides by it");
  }
  return 7.0 * e_norm * s.values(p - 1) / delta;
}

double psd_interaction_bound(const GapProfile& gp, double e_norm) {
  check_noise_norm(e_norm);
  if (!gp.psd) {
    throw std::invalid_argument("psd_interaction_bound: profile is not PSD");
  }
  const double lg = checked_log(10.0 * gp.sigma1, gp.delta_p, "top gap delta_p");
  const double rrx = double(gp.r) * double(gp.r) * gp.x;
  return 12.0 * (e_norm * lg + rrx * gp.lambda_p / gp.delta_p + rrx * lg);
}

double sym_gap_bound(const GapProfile& gp, double e_norm) {
  check_noise_norm(e_norm);
  if (!(gp.sigma1 > 0.0)) {
    throw numeric_error("sym_gap_bound: zero spectrum has no clusters");
  }
  double sum = 0.0;
  if (gp.delta_k) {
    sum += checked_log(6.0 * gp.sigma1, *gp.delta_k, "positive cluster gap") +
           *gp.lambda_k / *gp.delta_k;
  }
  if (gp.delta_bottom) {
    sum += checked_log(6.0 * gp.sigma1, *gp.delta_bottom, "bottom cluster gap") +
           std::abs(*gp.lambda_bottom) / *gp.delta_bottom;
  }
  return 6.0 * e_norm * sum;
}

double sym_interaction_bound(const GapProfile& gp, double e_norm) {
  check_noise_norm(e_norm);
  if (!(gp.sigma1 > 0.0)) {
    throw numeric_error("sym_interaction_bound: zero spectrum has no clusters");
  }
  double logs = 0.0;
  double tails = 0.0;
  int rr = 0;
  if (gp.delta_k) {
    logs += checked_log(6.0 * gp.sigma1, *gp.delta_k, "positive cluster gap");
    tails += *gp.lambda_k / *gp.delta_k;
    rr = std::max(rr, *gp.r1);
  }
  if (gp.delta_bottom) {
    logs += checked_log(6.0 * gp.sigma1, *gp.delta_bottom, "bottom cluster gap");
    tails += std::abs(*gp.lambda_bottom) / *gp.delta_bottom;
    rr = std::max(rr, *gp.r2);
  }
  const double rrx = double(rr) * double(rr) * gp.x_bar;
  return 12.0 * (e_norm + rrx) * logs + 30.0 * rrx * tails;
}

double functional_bound(const Spectrum& s, double e_norm, int p,
                        const EntireFn& f) {
  check_noise_norm(e_norm);
  const RectContour c = build_contour_psd(s, p);
  const double delta = s.values(p - 1) - s.values(p);
  return 4.0 * boundary_abs_max(f, c) * e_norm / delta;
}

bool weyl_check(const Spectrum& s, const Spectrum& st, double e_norm) {
  if (s.n() != st.n()) {
    throw std::invalid_argument("weyl_check: dimension mismatch");
  }
  check_noise_norm(e_norm);
  const double slack =
      kWeylSlack * std::max(1.0, std::max(s.source_norm, st.source_norm));
  const double budget = e_norm + slack;
  if (((st.values - s.values).cwiseAbs().array() > budget).any()) return false;
  const Eigen::VectorXd dsv = singular_values(st) - singular_values(s);
  return !(dsv.cwiseAbs().array() > budget).any();
}

double second_order_near_wall_bound(const GapProfile& gp, double e_norm,
                                    const RectContour& c) {
  check_noise_norm(e_norm);
  if (!gp.delta_k || !gp.r1 || !gp.x1) {
    throw std::invalid_argument(
        "second_order_near_wall_bound: no positive cluster");
  }
  const double delta = *gp.delta_k;
  const double pi = std::acos(-1.0);
  const double r1x = double(*gp.r1) * double(*gp.r1) * *gp.x1;
  const double pole =
      r1x * (2.0 * pi * std::abs(c.x0) / delta +
             2.0 * checked_log(3.0 * c.T, delta, "positive cluster gap"));
  const double tail = (20.0 + 4.0 * pi / std::log(10.0)) * e_norm *
                      checked_log(10.0 * gp.sigma1, delta, "positive cluster gap");
  return pole + tail;
}

BoundReport make_bound_report(const Spectrum& s, const SymMatrix& e, int p,
                              const Spectrum* perturbed, const EntireFn* f) {
  BoundReport rep;
  rep.profile = gap_profile(s, e, p);
  rep.e_norm = spectral_norm(e);
  rep.eym = eym_bound(s, rep.e_norm, p);

  const GapProfile& gp = rep.profile;
  if (gp.psd && gp.delta_p > 0.0) {
    rep.psd_gap = psd_gap_bound(s, rep.e_norm, p);
    if (gp.sigma1 > 0.0) {
      rep.psd_interaction = psd_interaction_bound(gp, rep.e_norm);
    }
  }
  const bool top_ok = !gp.delta_k || *gp.delta_k > 0.0;
  const bool bottom_ok = !gp.delta_bottom || *gp.delta_bottom > 0.0;
  if (gp.sigma1 > 0.0 && top_ok && bottom_ok) {
    rep.sym_gap = sym_gap_bound(gp, rep.e_norm);
    rep.sym_interaction = sym_interaction_bound(gp, rep.e_norm);
  }
  if (f != nullptr && s.values(0) > 2.0 * kWallMargin * gp.sigma1 &&
      gp.delta_p > kWallMargin * gp.sigma1 && gp.delta_p > 0.0) {
    rep.functional = functional_bound(s, rep.e_norm, p, *f);
  }
  if (perturbed != nullptr) {
    const SymMatrix diff(rank_p_approx(*perturbed, p).mat() -
                         rank_p_approx(s, p).mat());
    rep.actual_error = spectral_norm(diff);
    rep.weyl_ok = weyl_check(s, *perturbed, rep.e_norm);
  }
  rep.gap_ok_psd = gap_ok_psd(gp, rep.e_norm);
  rep.gap_ok_sym = gap_ok_sym(gp, rep.e_norm);
  rep.sv_gap_ok = sv_gap_ok(gp, rep.e_norm);
  return rep;
}

}  // namespace specbound
