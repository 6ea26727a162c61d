// SPDX-License-Identifier: MIT
#include "bellman/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "bellman/errors.hpp"

namespace bellman {

namespace {

double eval_poly(const std::vector<double>& coeffs, double t) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
  return v;
}

std::vector<double> integrate_poly(const std::vector<double>& coeffs) {
  std::vector<double> out(coeffs.size() + 1, 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    out[j + 1] = coeffs[j] / static_cast<double>(j + 1);
  }
  return out;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

// ==== PiecewisePoly ==========================================================

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints,
                             std::vector<std::vector<double>> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breakpoints_.size() + 1) {
    throw ConfigError("PiecewisePoly: need one more piece than breakpoints");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()) ||
      std::adjacent_find(breakpoints_.begin(), breakpoints_.end()) !=
          breakpoints_.end()) {
    throw ConfigError("PiecewisePoly: breakpoints must strictly increase");
  }
}

double PiecewisePoly::operator()(double t) const {
  const std::size_t cell = static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
      breakpoints_.begin());
  return eval_poly(pieces_[cell], t);
}

PiecewisePoly PiecewisePoly::antiderivative(double anchor_t,
                                            double anchor_value) const {
  std::vector<std::vector<double>> prim(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    prim[i] = integrate_poly(pieces_[i]);
  }
  // Pin the anchor cell's constant, then propagate continuity outward.
  const std::size_t anchor_cell = static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), anchor_t) -
      breakpoints_.begin());
  prim[anchor_cell][0] += anchor_value - eval_poly(prim[anchor_cell], anchor_t);
  for (std::size_t i = anchor_cell; i + 1 < prim.size(); ++i) {
    const double knot = breakpoints_[i];
    prim[i + 1][0] += eval_poly(prim[i], knot) - eval_poly(prim[i + 1], knot);
  }
  for (std::size_t i = anchor_cell; i > 0; --i) {
    const double knot = breakpoints_[i - 1];
    prim[i - 1][0] += eval_poly(prim[i], knot) - eval_poly(prim[i - 1], knot);
  }
  return PiecewisePoly(breakpoints_, std::move(prim));
}

// ==== sign patterns ==========================================================

SignPattern detect_pattern(const std::function<double(double)>& f3, double lo,
                           double hi, int samples) {
  if (!(lo < hi) || samples < 8) {
    throw ConfigError("detect_pattern: bad scan range");
  }
  // Collect strict-sign samples, then refine each sign flip by bisection.
  struct Probe {
    double t;
    int sign;
  };
  std::vector<Probe> probes;
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + (hi - lo) * i / samples;
    const int s = sign_of(f3(t));
    if (s != 0) probes.push_back({t, s});
  }
  if (probes.empty()) {
    throw ClassGateError("detect_pattern: third derivative has no strict sign");
  }
  std::vector<double> down, up;  // +→− and −→+ switch abscissas
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    if (probes[i].sign == probes[i + 1].sign) continue;
    const double root = find_root_monotone(f3, probes[i].t, probes[i + 1].t,
                                           1e-13 * (1.0 + std::abs(lo) +
                                                    std::abs(hi)));
    (probes[i].sign > 0 ? down : up).push_back(root);
  }
  SignPattern pattern;
  if (probes.front().sign < 0) pattern.c_points.push_back(kNegInf);
  // Merge the two switch lists in abscissa order, checking alternation.
  std::size_t di = 0, ui = 0;
  bool expect_down = probes.front().sign > 0;
  while (di < down.size() || ui < up.size()) {
    const bool take_down =
        ui == up.size() || (di < down.size() && down[di] < up[ui]);
    if (take_down != expect_down) {
      throw ClassGateError("detect_pattern: sign changes do not alternate");
    }
    if (take_down) {
      pattern.c_points.push_back(down[di++]);
    } else {
      pattern.v_points.push_back(up[ui++]);
    }
    expect_down = !expect_down;
  }
  if (probes.back().sign > 0) pattern.c_points.push_back(kPosInf);
  if (pattern.c_points.size() != pattern.v_points.size() + 1) {
    throw ClassGateError("detect_pattern: switch lists do not interleave");
  }
  return pattern;
}

double min_separation(const SignPattern& pattern) {
  double best = kPosInf;
  for (double c : pattern.c_points) {
    if (!is_finite(c)) continue;
    for (double v : pattern.v_points) {
      best = std::min(best, std::abs(c - v));
    }
  }
  return best;
}

BoundaryFunction affine_pushforward(const BoundaryFunction& f,
                                    const AffineTransform& t) {
  if (t.a == 0.0 || t.c == 0.0) {
    throw ConfigError("affine_pushforward: a and c must be nonzero");
  }
  BoundaryFunction g;
  g.name = f.name + "~affine";
  const auto fa = f;  // capture by value: g must outlive f
  g.f = [fa, t](double s) {
    return t.c * fa.f(t.a * s + t.b) + t.d * s * s + t.alpha * s + t.beta;
  };
  g.f1 = [fa, t](double s) {
    return t.c * t.a * fa.f1(t.a * s + t.b) + 2.0 * t.d * s + t.alpha;
  };
  g.f2 = [fa, t](double s) {
    return t.c * t.a * t.a * fa.f2(t.a * s + t.b) + 2.0 * t.d;
  };
  g.f3 = [fa, t](double s) {
    return t.c * t.a * t.a * t.a * fa.f3(t.a * s + t.b);
  };
  g.eps0 = is_finite(f.eps0) ? f.eps0 / std::abs(t.a) : kPosInf;
  g.kinks.reserve(f.kinks.size());
  for (double k : f.kinks) g.kinks.push_back((k - t.b) / t.a);
  std::sort(g.kinks.begin(), g.kinks.end());

  // Switch points map through s = (p − b)/a.  Around a mapped point the new
  // sign on the left is sign(c·a³)·(old sign on the side a reflection brings
  // there), so the down/up ROLE of a finite switch flips iff
  // sign(c·a³)·sign(a) < 0, i.e. iff c < 0; the far-end signs transform by
  // sign(c·a³) with the two ends exchanged when a < 0.
  const bool role_flip = t.c < 0.0;
  const bool sign_flip = t.c * t.a * t.a * t.a < 0.0;
  const bool reverse = t.a < 0.0;
  struct Switch {
    double s;
    bool down;
  };
  std::vector<Switch> switches;
  for (double c : f.pattern.c_points) {
    if (is_finite(c)) switches.push_back({(c - t.b) / t.a, !role_flip});
  }
  for (double v : f.pattern.v_points) {
    switches.push_back({(v - t.b) / t.a, role_flip});
  }
  std::sort(switches.begin(), switches.end(),
            [](const Switch& l, const Switch& r) { return l.s < r.s; });
  // Far-left sign of g‴: the old far side (left, or right when a < 0) has
  // sign +1 iff its outermost switch is a finite downward point or +∞-ward
  // the pattern ends with... the old far-left sign is negative exactly when
  // c_points begins with −∞, and the old far-right sign is negative exactly
  // when c_points does not end with +∞.
  const int old_left = is_finite(f.pattern.c_points.front()) ? +1 : -1;
  const int old_right = is_finite(f.pattern.c_points.back()) ? -1 : +1;
  int new_left = reverse ? old_right : old_left;
  if (sign_flip) new_left = -new_left;
  int new_right = reverse ? old_left : old_right;
  if (sign_flip) new_right = -new_right;

  SignPattern p;
  if (new_left < 0) p.c_points.push_back(kNegInf);
  bool expect_down = new_left > 0;
  for (const Switch& sw : switches) {
    if (sw.down != expect_down) {
      throw ClassGateError("affine_pushforward: transformed switches tangle");
    }
    if (sw.down) {
      p.c_points.push_back(sw.s);
    } else {
      p.v_points.push_back(sw.s);
    }
    expect_down = !expect_down;
  }
  if (new_right > 0) p.c_points.push_back(kPosInf);
  if (p.c_points.size() != p.v_points.size() + 1) {
    throw ClassGateError("affine_pushforward: transformed pattern malformed");
  }
  g.pattern = std::move(p);
  return g;
}

}  // namespace bellman
