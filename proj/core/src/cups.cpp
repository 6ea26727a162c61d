// SPDX-License-Identifier: MIT
#include "bellman/cups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <math.h>  // hoists isnan into the global namespace for pchip.hpp

#include <boost/math/interpolators/pchip.hpp>

#include "bellman/errors.hpp"
#include "bellman/numerics.hpp"

namespace bellman {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

/// Window (prev_v, next_v) of upward switch points bracketing origin_c; chord
/// ends must stay strictly inside it for the defect signs to hold.
struct GrowthWindow {
  ExtendedReal lo = kNegInf;
  ExtendedReal hi = kPosInf;
};

GrowthWindow growth_window(const SignPattern& pattern, double origin_c) {
  GrowthWindow w;
  for (double v : pattern.v_points) {
    if (v < origin_c) w.lo = std::max<ExtendedReal>(w.lo, v);
    if (v > origin_c) w.hi = std::min<ExtendedReal>(w.hi, v);
  }
  return w;
}

/// Solve Φ(a, ell) = 0 for a in [lo, hi].  Φ is strictly decreasing in a on
/// the valid sheet, so a sign change certifies the root.
std::optional<double> solve_left_end(const BoundaryFunction& f, double ell,
                                     double lo, double hi, double tol) {
  if (!(lo < hi)) return std::nullopt;
  const double phi_lo = chord_mismatch(f, lo, ell);
  const double phi_hi = chord_mismatch(f, hi, ell);
  if (phi_lo == 0.0) return lo;
  if (phi_hi == 0.0) return hi;
  if (phi_lo * phi_hi > 0.0) return std::nullopt;
  return find_root_monotone(
      [&](double a) { return chord_mismatch(f, a, ell); }, lo, hi, tol);
}

}  // namespace

double chord_mismatch(const BoundaryFunction& f, double a, double ell) {
  const double b = a + ell;
  return ell * (f.f1(a) + f.f1(b)) - 2.0 * (f.f(b) - f.f(a));
}

ChordDifferentials differentials(const BoundaryFunction& f, double a,
                                 double b) {
  const double mean_f2 = (f.f1(b) - f.f1(a)) / (b - a);
  return {f.f2(a) - mean_f2, f.f2(b) - mean_f2};
}

CupFamily grow_cup(const BoundaryFunction& f, double origin_c, double eps) {
  if (!is_finite(origin_c)) {
    throw ConstructionError("grow_cup: origin must be finite");
  }
  CupFamily cup;
  cup.origin_c = origin_c;
  cup.eps = eps;

  const GrowthWindow window = growth_window(f.pattern, origin_c);
  const double scale = 1.0 + std::abs(origin_c) + 2.0 * eps;
  const double a_tol = 1e-13 * scale;
  const double sign_slack = 1e-12 * (1.0 + std::abs(f.f2(origin_c)));

  const double ell_step = 2.0 * eps / 256.0;
  const double ell_full = 2.0 * eps;

  // The mismatch scales like ℓ⁴ at the origin (f″′ vanishes there), so at the
  // shortest lengths the signal can sink below the cancellation noise of Φ
  // whenever |f| = O(1) near the origin.  Escalate the seed length until the
  // bracket shows a usable sign change.
  double ell_seed = 1e-4 * eps;
  while (ell_seed < ell_full) {
    double lo = origin_c - ell_seed;
    const double hi =
        std::min(origin_c, static_cast<double>(window.hi) - ell_seed);
    if (is_finite(window.lo)) lo = std::max(lo, static_cast<double>(window.lo));
    if (!(lo < hi)) break;
    // A genuine bracket must clear the rounding floor of Φ at both ends with
    // the right orientation (Φ decreases in a near the origin); bare sign
    // changes at this scale can be cancellation noise.
    const double b_hi = hi + ell_seed;
    const double noise_floor =
        1e-13 *
        (std::abs(f.f(lo)) + std::abs(f.f(b_hi)) +
         ell_seed * (std::abs(f.f1(lo)) + std::abs(f.f1(b_hi))) + 1e-30);
    const double phi_lo = chord_mismatch(f, lo, ell_seed);
    const double phi_hi = chord_mismatch(f, hi, ell_seed);
    if (phi_lo > noise_floor && phi_hi < -noise_floor) break;
    ell_seed = std::min(2.0 * ell_seed, ell_full);
  }

  // Length schedule: geometric from the seed up to the uniform spacing, then
  // uniform to 2ε (the last step lands on 2ε exactly).
  std::vector<double> schedule;
  schedule.push_back(ell_seed);
  for (double ell = 2.0 * ell_seed; ell < ell_step; ell *= 2.0) {
    schedule.push_back(ell);
  }
  for (double ell = ell_step; ell < ell_full - 0.5 * ell_step;
       ell += ell_step) {
    if (ell > schedule.back()) schedule.push_back(ell);
  }
  if (schedule.back() < ell_full) schedule.push_back(ell_full);

  double a_prev = origin_c;
  double ell_prev = 0.0;
  for (double ell : schedule) {
    const double step = ell - ell_prev;
    // da/dℓ ∈ (−1, 0) along a valid family, so the new left end lies in
    // (a_prev − Δℓ, a_prev); both chord ends must stay inside the window.
    double lo = a_prev - step;
    double hi = std::min(a_prev, static_cast<double>(window.hi) - ell);
    if (is_finite(window.lo)) lo = std::max(lo, static_cast<double>(window.lo));
    auto root = solve_left_end(f, ell, lo, hi, a_tol);
    if (!root) {
      // Widen once toward the full window before declaring an obstruction.
      double wide_lo = a_prev - 1.5 * step;
      if (is_finite(window.lo)) {
        wide_lo = std::max(wide_lo, static_cast<double>(window.lo));
      }
      root = solve_left_end(f, ell, wide_lo, hi, a_tol);
    }
    if (!root) break;  // chord family obstructed before this length

    const double a = *root;
    const double b = a + ell;
    const ChordDifferentials d = differentials(f, a, b);
    if (d.d_left >= -sign_slack || d.d_right >= -sign_slack) break;

    cup.ell_nodes.push_back(ell);
    cup.a_nodes.push_back(a);
    a_prev = a;
    ell_prev = ell;
  }

  if (cup.ell_nodes.empty()) {
    throw ConstructionError("grow_cup: no extremal chord found at seed length");
  }
  cup.ell_max = cup.ell_nodes.back();
  cup.full = cup.ell_max >= ell_full - 1e-12 * eps;

  if (cup.ell_nodes.size() >= 4) {
    std::vector<double> xs = cup.ell_nodes;
    std::vector<double> ys = cup.a_nodes;
    cup.interpolant = std::make_shared<Pchip>(std::move(xs), std::move(ys));
  }
  return cup;
}

double refine_chord_left_end(const BoundaryFunction& f, double a, double ell) {
  if (!(ell > 0.0)) return a;
  double best_a = a;
  double best_phi = std::abs(chord_mismatch(f, a, ell));
  for (int k = 0; k < 8; ++k) {
    const double phi = chord_mismatch(f, a, ell);
    if (std::abs(phi) < best_phi) {
      best_phi = std::abs(phi);
      best_a = a;
    }
    const ChordDifferentials d = differentials(f, a, a + ell);
    const double dphi = ell * (d.d_left + d.d_right);
    if (dphi == 0.0) break;
    // Step cap keeps the iterate on the sheet the table bracketed even when
    // Φ_a degenerates near a structural threshold.
    double step = phi / dphi;
    const double cap = 0.1 * ell;
    if (step > cap) step = cap;
    if (step < -cap) step = -cap;
    a -= step;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(a))) {
      if (std::abs(chord_mismatch(f, a, ell)) < best_phi) best_a = a;
      break;
    }
  }
  return best_a;
}

double CupFamily::a_of_ell(double ell) const {
  if (ell_nodes.empty()) {
    throw ConstructionError("CupFamily: empty table");
  }
  if (ell <= ell_nodes.front()) {
    // Linear closure through the degenerate chord (ℓ=0 at the origin).
    const double t = ell / ell_nodes.front();
    return origin_c + t * (a_nodes.front() - origin_c);
  }
  const double ell_hi = std::min(ell, ell_max);
  if (interpolant) {
    const auto* spline = static_cast<const Pchip*>(interpolant.get());
    return (*spline)(ell_hi);
  }
  // Tiny table: piecewise-linear fallback.
  auto it = std::upper_bound(ell_nodes.begin(), ell_nodes.end(), ell_hi);
  const std::size_t j = static_cast<std::size_t>(it - ell_nodes.begin());
  if (j >= ell_nodes.size()) return a_nodes.back();
  const double t =
      (ell_hi - ell_nodes[j - 1]) / (ell_nodes[j] - ell_nodes[j - 1]);
  return a_nodes[j - 1] + t * (a_nodes[j] - a_nodes[j - 1]);
}

std::optional<double> locate_chord(const CupFamily& cup, Point x, double tol) {
  // Signed height of x above the chord line at length ℓ; decreasing in ℓ as
  // the chords sweep upward.
  const auto height = [&](double ell) {
    const double a = cup.a_of_ell(ell);
    const double b = a + ell;
    return x.x2 - (a + b) * x.x1 + a * b;
  };
  const double scale =
      1.0 + std::abs(cup.origin_c) + 2.0 * cup.eps;
  const double height_tol = 1e-11 * scale * scale;

  const double top = height(cup.ell_max);
  if (top > height_tol) return std::nullopt;  // above the last chord
  double ell = cup.ell_max;
  if (top < -height_tol) {
    const double bottom = height(0.0);
    if (bottom < -height_tol) return std::nullopt;  // below the origin point
    ell = find_root_monotone(height, 0.0, cup.ell_max, tol);
  }
  const double a = cup.a_of_ell(ell);
  const double b = a + ell;
  const double end_tol = 1e-9 * scale;
  if (x.x1 < a - end_tol || x.x1 > b + end_tol) return std::nullopt;
  return ell;
}

double eval_cup(const CupFamily& cup, const BoundaryFunction& f, Point x) {
  const auto ell = locate_chord(cup, x);
  if (!ell) {
    throw ConstructionError("eval_cup: point is outside the cup region");
  }
  const double a = cup.a_of_ell(*ell);
  const double b = a + *ell;
  if (*ell < 1e-300 || b - a < 1e-300) return f.f(x.x1);
  const double t = std::clamp((x.x1 - a) / (b - a), 0.0, 1.0);
  return (1.0 - t) * f.f(a) + t * f.f(b);
}

}  // namespace bellman
