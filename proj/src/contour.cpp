// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#include "specbound/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <type_traits>

namespace specbound {

namespace {

constexpr double kWallTol = 1e-12;  // times ||A||, eigenvalue-to-wall guard
constexpr double kTwoPi = 2.0 * M_PI;

void check_quad(const QuadSpec& q) {
  if (q.points_per_segment < 16) {
    throw std::invalid_argument("points_per_segment must be >= 16");
  }
  if (!(q.rel_tol > 0.0)) {
    throw std::invalid_argument("rel_tol must be > 0");
  }
  if (q.max_doublings < 0) {
    throw std::invalid_argument("max_doublings must be >= 0");
  }
}

template <typename Scalar>
Scalar segment_measure(const Segment& seg) {
  if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
    return seg.b - seg.a;  // oriented dz
  } else {
    return std::abs(seg.b - seg.a);  // arclength |dz|
  }
}

// Composite trapezoid over the given segments with global doubling: every
// segment refines together and the summed estimates must settle componentwise
// to rel_tol before the doubling cap. With shared_scale the components carry
// the same units and a component resting below rel_tol times the batch
// magnitude counts as converged; this is what lets exact zeros (projector
// entries of excluded eigenvalues) terminate.
template <typename Scalar, typename Eval>
std::vector<Scalar> quad_segments(std::span<const Segment> segs, int arity,
                                  const QuadSpec& q, Eval&& eval,
                                  bool shared_scale = false) {
  check_quad(q);
  const int nseg = static_cast<int>(segs.size());
  std::vector<std::vector<Scalar>> est(nseg, std::vector<Scalar>(arity));
  std::vector<Scalar> vals(arity);

  long long intervals = q.points_per_segment;
  for (int s = 0; s < nseg; ++s) {
    const auto [a, b] = segs[s];
    std::vector<Scalar> acc(arity, Scalar{});
    for (long long i = 0; i <= intervals; ++i) {
      const std::complex<double> z =
          a + (b - a) * (static_cast<double>(i) / intervals);
      eval(z, vals);
      const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
      for (int c = 0; c < arity; ++c) acc[c] += w * vals[c];
    }
    const Scalar h = segment_measure<Scalar>(segs[s]) / double(intervals);
    for (int c = 0; c < arity; ++c) est[s][c] = h * acc[c];
  }

  auto totals = [&]() {
    std::vector<Scalar> t(arity, Scalar{});
    for (int s = 0; s < nseg; ++s) {
      for (int c = 0; c < arity; ++c) t[c] += est[s][c];
    }
    return t;
  };

  std::vector<Scalar> cur = totals();
  for (int round = 0; round < q.max_doublings; ++round) {
    const std::vector<Scalar> prev = cur;
    for (int s = 0; s < nseg; ++s) {
      const auto [a, b] = segs[s];
      std::vector<Scalar> acc(arity, Scalar{});
      for (long long i = 0; i < intervals; ++i) {
        const std::complex<double> z =
            a + (b - a) * ((static_cast<double>(i) + 0.5) / intervals);
        eval(z, vals);
        for (int c = 0; c < arity; ++c) acc[c] += vals[c];
      }
      const Scalar h = segment_measure<Scalar>(segs[s]) / double(2 * intervals);
      for (int c = 0; c < arity; ++c) est[s][c] = 0.5 * est[s][c] + h * acc[c];
    }
    intervals *= 2;
    cur = totals();

    double batch_scale = 0.0;
    if (shared_scale) {
      for (int c = 0; c < arity; ++c) {
        batch_scale = std::max(
            batch_scale, std::max(std::abs(cur[c]), std::abs(prev[c])));
      }
    }
    bool converged = true;
    for (int c = 0; c < arity; ++c) {
      const double diff = std::abs(cur[c] - prev[c]);
      const double scale = std::max(std::abs(cur[c]), std::abs(prev[c]));
      if (diff <= q.rel_tol * scale) continue;
      if (shared_scale && scale <= q.rel_tol * batch_scale) continue;
      converged = false;
      break;
    }
    if (converged) return cur;

    if (round + 1 == q.max_doublings) {
      int worst = 0;
      double worst_rel = -1.0;
      for (int c = 0; c < arity; ++c) {
        const double scale = std::max(std::abs(cur[c]), std::abs(prev[c]));
        const double rel = scale > 0.0 ? std::abs(cur[c] - prev[c]) / scale : 0.0;
        if (rel > worst_rel) {
          worst_rel = rel;
          worst = c;
        }
      }
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "quadrature did not converge after %d doublings; last "
                    "estimates %.17g and %.17g",
                    q.max_doublings, std::abs(prev[worst]), std::abs(cur[worst]));
      throw numeric_error(buf);
    }
  }
  // max_doublings == 0: nothing to compare against.
  throw numeric_error("quadrature cannot assess convergence without doublings");
}

// Entries 1/(z - lambda_i); rejects z within the pole guard of the spectrum.
Eigen::VectorXcd resolvent_diag(const Eigen::VectorXd& values,
                                std::complex<double> z, double norm) {
  const int n = static_cast<int>(values.size());
  Eigen::VectorXcd d(n);
  const double guard = kWallTol * norm;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> den = z - values(i);
    if (std::abs(den) <= guard) {
      throw numeric_error("evaluation point lies on an eigenvalue pole");
    }
    d(i) = 1.0 / den;
  }
  return d;
}

// Distance from a real point to the rectangle boundary.
double wall_distance(double x, const RectContour& c) {
  const double dl = std::abs(x - c.x0);
  const double dr = std::abs(x - c.x1);
  if (x > c.x0 && x < c.x1) return std::min({dl, dr, c.T});
  return std::min(dl, dr);
}

void check_walls(const Spectrum& s, const RectContour& c) {
  if (!(c.x0 < c.x1) || !(c.T > 0.0)) {
    throw numeric_error("degenerate contour rectangle");
  }
  const double guard = kWallTol * s.source_norm;
  for (int i = 0; i < s.n(); ++i) {
    if (wall_distance(s.values(i), c) <= guard) {
      throw numeric_error("eigenvalue on contour wall");
    }
  }
}

}  // namespace

std::array<Segment, 4> RectContour::segments() const {
  const std::complex<double> bl(x0, -T), tl(x0, T), tr(x1, T), br(x1, -T);
  return {Segment{bl, tl}, Segment{tl, tr}, Segment{tr, br}, Segment{br, bl}};
}

RectContour build_contour_psd(const Spectrum& s, int p) {
  const int n = s.n();
  if (p < 1 || p > n - 1) {
    throw std::invalid_argument("build_contour_psd: no (p+1)-st eigenvalue");
  }
  const double delta = s.values(p - 1) - s.values(p);
  if (!(delta > 0.0)) {
    throw numeric_error("top cluster gap vanishes; contour undefined");
  }
  if (!(s.values(0) > 0.0)) {
    throw numeric_error("largest eigenvalue must be positive");
  }
  RectContour c{s.values(p - 1) - delta / 2.0, 2.0 * s.values(0),
                2.0 * s.values(0)};
  check_walls(s, c);
  return c;
}

SymContours build_contours_sym(const Spectrum& s, int p) {
  const int n = s.n();
  if (p < 1 || p > n - 1) {
    throw std::invalid_argument("build_contours_sym: no (p+1)-st eigenvalue");
  }
  const int k = split_index_k(s, p);
  if (k == 0) {
    throw numeric_error(
        "selection has no positive eigenvalues; top-cluster contour undefined");
  }
  const double sigma1 = s.source_norm;
  if (!(sigma1 > 0.0)) {
    throw numeric_error("zero matrix has no cluster contours");
  }

  SymContours out;
  const double delta_k = s.values(k - 1) - s.values(k);
  if (!(delta_k > 0.0)) {
    throw numeric_error("top cluster gap vanishes; contour undefined");
  }
  out.top = RectContour{s.values(k - 1) - delta_k / 2.0, 2.0 * sigma1,
                        2.0 * sigma1};
  check_walls(s, out.top);

  if (p > k) {
    const int bi = n - (p - k);  // 0-based index of the bottom cluster head
    const double delta_b = s.values(bi - 1) - s.values(bi);
    if (!(delta_b > 0.0)) {
      throw numeric_error("bottom cluster gap vanishes; contour undefined");
    }
    RectContour bottom{-2.0 * sigma1, s.values(bi) + delta_b / 2.0,
                       2.0 * sigma1};
    check_walls(s, bottom);
    out.bottom = bottom;
  }
  return out;
}

Eigen::MatrixXcd resolvent(const Spectrum& s, std::complex<double> z) {
  const Eigen::VectorXcd d = resolvent_diag(s.values, z, s.source_norm);
  const Eigen::MatrixXcd u = s.vectors.cast<std::complex<double>>();
  return u * d.asDiagonal() * u.transpose();
}

SymMatrix contour_project(const Spectrum& s, const EntireFn& f,
                          const RectContour& c, const QuadSpec& q) {
  const int n = s.n();
  const auto segs = c.segments();
  auto eval = [&](std::complex<double> z, std::vector<std::complex<double>>& out) {
    const std::complex<double> fz = f(z);
    const double guard = kWallTol * s.source_norm;
    for (int i = 0; i < n; ++i) {
      const std::complex<double> den = z - s.values(i);
      if (std::abs(den) <= guard) {
        throw numeric_error("evaluation point lies on an eigenvalue pole");
      }
      out[i] = fz / den;
    }
  };
  const std::vector<std::complex<double>> raw =
      quad_segments<std::complex<double>>(std::span(segs), n, q, eval,
                                          /*shared_scale=*/true);

  // The listed wall order traverses the rectangle clockwise; flip the sign to
  // realize the positively oriented projector integral 1/(2 pi i) * dz-sum.
  Eigen::VectorXd diag(n);
  double max_re = 0.0, max_im = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> r =
        raw[i] * std::complex<double>(0.0, 1.0 / kTwoPi);
    diag(i) = r.real();
    max_re = std::max(max_re, std::abs(r.real()));
    max_im = std::max(max_im, std::abs(r.imag()));
  }
  if (max_im > q.rel_tol * max_re + 1e-14 * (1.0 + s.source_norm)) {
    throw numeric_error("contour projection kept a non-negligible imaginary part");
  }
  Eigen::MatrixXd out = s.vectors * diag.asDiagonal() * s.vectors.transpose();
  return SymMatrix(out);
}

BootstrapIntegrals bootstrap_integrals(const Spectrum& sa, const Spectrum& sat,
                                       const SymMatrix& e,
                                       const std::vector<EntireFn>& fs,
                                       const RectContour& c,
                                       const QuadSpec& q) {
  const int n = sa.n();
  if (sat.n() != n || e.n() != n) {
    throw std::invalid_argument("bootstrap_integrals: dimension mismatch");
  }
  if (fs.empty()) {
    throw std::invalid_argument("bootstrap_integrals: empty function list");
  }
  const int nf = static_cast<int>(fs.size());

  // Everything is evaluated in the eigenbasis of A: with V = U^T U~ and
  // W = U^T E U, orthogonal invariance turns both integrand norms into
  // diagonal-sandwich expressions.
  const Eigen::MatrixXcd v =
      (sa.vectors.transpose() * sat.vectors).cast<std::complex<double>>();
  const Eigen::MatrixXcd w =
      (sa.vectors.transpose() * e.mat() * sa.vectors).cast<std::complex<double>>();

  const auto segs = c.segments();
  auto eval = [&](std::complex<double> z, std::vector<double>& out) {
    const Eigen::VectorXcd da = resolvent_diag(sa.values, z, sa.source_norm);
    const Eigen::VectorXcd dat = resolvent_diag(sat.values, z, sat.source_norm);
    Eigen::MatrixXcd x = v * dat.asDiagonal() * v.transpose();
    x.diagonal() -= da;
    const double base_pert = spectral_norm(x);
    const Eigen::MatrixXcd y = da.asDiagonal() * w * da.asDiagonal();
    const double base_first = spectral_norm(y);
    for (int j = 0; j < nf; ++j) {
      const double af = std::abs(fs[j](z));
      out[2 * j] = af * base_pert;
      out[2 * j + 1] = af * base_first;
    }
  };
  const std::vector<double> tot =
      quad_segments<double>(std::span(segs), 2 * nf, q, eval);

  BootstrapIntegrals out;
  out.perturbation.resize(nf);
  out.first_order.resize(nf);
  for (int j = 0; j < nf; ++j) {
    out.perturbation[j] = tot[2 * j] / kTwoPi;
    out.first_order[j] = tot[2 * j + 1] / kTwoPi;
  }
  return out;
}

double perturbation_integral(const Spectrum& sa, const Spectrum& sat,
                             const EntireFn& f, const RectContour& c,
                             const QuadSpec& q) {
  const int n = sa.n();
  if (sat.n() != n) {
    throw std::invalid_argument("perturbation_integral: dimension mismatch");
  }
  const Eigen::MatrixXcd v =
      (sa.vectors.transpose() * sat.vectors).cast<std::complex<double>>();
  const auto segs = c.segments();
  auto eval = [&](std::complex<double> z, std::vector<double>& out) {
    const Eigen::VectorXcd da = resolvent_diag(sa.values, z, sa.source_norm);
    const Eigen::VectorXcd dat = resolvent_diag(sat.values, z, sat.source_norm);
    Eigen::MatrixXcd x = v * dat.asDiagonal() * v.transpose();
    x.diagonal() -= da;
    out[0] = std::abs(f(z)) * spectral_norm(x);
  };
  return quad_segments<double>(std::span(segs), 1, q, eval)[0] / kTwoPi;
}

double first_order_integral(const Spectrum& sa, const SymMatrix& e,
                            const EntireFn& f, const RectContour& c,
                            const QuadSpec& q) {
  const int n = sa.n();
  if (e.n() != n) {
    throw std::invalid_argument("first_order_integral: dimension mismatch");
  }
  const Eigen::MatrixXcd w =
      (sa.vectors.transpose() * e.mat() * sa.vectors).cast<std::complex<double>>();
  const auto segs = c.segments();
  auto eval = [&](std::complex<double> z, std::vector<double>& out) {
    const Eigen::VectorXcd da = resolvent_diag(sa.values, z, sa.source_norm);
    const Eigen::MatrixXcd y = da.asDiagonal() * w * da.asDiagonal();
    out[0] = std::abs(f(z)) * spectral_norm(y);
  };
  return quad_segments<double>(std::span(segs), 1, q, eval)[0] / kTwoPi;
}

SegmentIntegrals segment_integrals(const Spectrum& s, const SymMatrix& e,
                                   const RectContour& c, const QuadSpec& q) {
  const int n = s.n();
  if (e.n() != n) {
    throw std::invalid_argument("segment_integrals: dimension mismatch");
  }
  const Eigen::MatrixXcd w =
      (s.vectors.transpose() * e.mat() * s.vectors).cast<std::complex<double>>();
  const auto segs = c.segments();

  SegmentIntegrals out;
  for (int wall = 0; wall < 4; ++wall) {
    auto eval = [&](std::complex<double> z, std::vector<double>& vals) {
      const Eigen::VectorXcd da = resolvent_diag(s.values, z, s.source_norm);
      const Eigen::MatrixXcd y = da.asDiagonal() * w * da.asDiagonal();
      vals[0] = std::abs(z) * spectral_norm(y);
      const double min_dist = 1.0 / da.cwiseAbs().maxCoeff();
      vals[1] = std::abs(z) / (min_dist * min_dist);
    };
    const std::vector<double> tot =
        quad_segments<double>(std::span(&segs[wall], 1), 2, q, eval);
    out.second_order[wall] = tot[0];
    out.pole_majorant[wall] = tot[1];
  }
  return out;
}

double near_wall_pole_bound(double near_x, double delta, double T) {
  if (!(delta > 0.0) || !(T > 0.0)) {
    throw std::invalid_argument("near_wall_pole_bound: delta and T must be > 0");
  }
  return kTwoPi * std::abs(near_x) / delta + 4.0 * std::log(3.0 * T / delta);
}

double far_wall_pole_bound(double far_x, double dist, double T) {
  if (!(dist > 0.0) || !(T > 0.0)) {
    throw std::invalid_argument("far_wall_pole_bound: dist and T must be > 0");
  }
  return M_PI * std::abs(far_x) / dist + 4.0 * std::log(3.0 * T / dist);
}

double horizontal_wall_pole_bound(double width, double T) {
  if (!(width >= 0.0) || !(T > 0.0)) {
    throw std::invalid_argument("horizontal_wall_pole_bound: bad geometry");
  }
  return std::sqrt(2.0) * width / T;
}

ArctanCheck arctan_integral_check(double a, double T, const QuadSpec& q) {
  if (!(a > 0.0) || !(a <= T)) {
    throw std::invalid_argument("arctan_integral_check requires 0 < a <= T");
  }
  const Segment seg{std::complex<double>(-T, 0.0), std::complex<double>(T, 0.0)};
  auto eval = [&](std::complex<double> z, std::vector<double>& vals) {
    const double t = z.real();
    vals[0] = 1.0 / (t * t + a * a);
  };
  ArctanCheck out;
  out.value = quad_segments<double>(std::span(&seg, 1), 1, q, eval)[0];
  out.bound = M_PI / a;
  return out;
}

double boundary_abs_max(const EntireFn& f, const RectContour& c) {
  constexpr int kGrid = 1024;  // per wall, corners included
  const auto segs = c.segments();
  auto at = [&](int wall, double t) {
    const std::complex<double> z =
        segs[wall].a + (segs[wall].b - segs[wall].a) * t;
    return std::abs(f(z));
  };

  double best = -1.0;
  int best_wall = 0;
  double best_t = 0.0;
  for (int wall = 0; wall < 4; ++wall) {
    for (int i = 0; i < kGrid; ++i) {
      const double t = static_cast<double>(i) / (kGrid - 1);
      const double v = at(wall, t);
      if (v > best) {
        best = v;
        best_wall = wall;
        best_t = t;
      }
    }
  }
  // One bisection refinement around the argmax.
  const double h = 0.5 / (kGrid - 1);
  for (double t : {best_t - h, best_t + h}) {
    if (t >= 0.0 && t <= 1.0) best = std::max(best, at(best_wall, t));
  }
  return best;
}

}  // namespace specbound
