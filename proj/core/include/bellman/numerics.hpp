// SPDX-License-Identifier: MIT
#ifndef BELLMAN_NUMERICS_HPP
#define BELLMAN_NUMERICS_HPP

#include <functional>
#include <vector>

#include "bellman/geometry.hpp"

namespace bellman {

/// Tolerances and limits for the adaptive quadrature and, where noted, for
/// derived routines that are built on it.
struct QuadratureSettings {
  /// Relative tolerance on the value of the integral.
  double rel_tol = 1e-10;
  /// Absolute tolerance; also the budget for truncated improper tails.
  double abs_tol = 1e-13;
  /// Hard cap on panel subdivisions before an accuracy error is raised.
  int max_subdivisions = 2000;
  /// Known exponential-growth bound of the integrand factor g (per unit t),
  /// e.g. 1/ε₀ for a boundary function of growth parameter ε₀.  Zero means
  /// "unknown": the growth rate is then estimated from samples.  When the
  /// bound is known and the weight cannot dominate it, improper integrals
  /// fail fast with a divergence error.
  double envelope_rate = 0.0;
  /// Abscissas where the integrand is known to be non-smooth (jumps or
  /// kinks).  Panels are seeded at these points: an error estimate on a
  /// panel with an interior jump is unreliable, so jumps must sit on panel
  /// boundaries.  Callers that integrate g(u + τ) must translate these.
  std::vector<double> split_points;
};

/// ∫_lo^hi g(t)·e^{rate·t/ε} dt.
///
/// Either endpoint may be infinite provided the weight decays toward that
/// end (rate > 0 for lo = −∞, rate < 0 for hi = +∞).  Improper tails are
/// truncated where a fitted envelope bound C·e^{ρ|t|} on |g| drives the
/// remaining mass below abs_tol; the fit is sampled at marches of ε from the
/// finite end and re-checked once at the chosen truncation point.  Panels use
/// a fixed 15-point Gauss–Kronrod rule with globally adaptive bisection
/// (worst panel first, ties to the left), which makes results deterministic.
/// All exponentials are evaluated in the shifted form e^{rate·(t−t₀)/ε} with
/// t₀ the finite endpoint nearest the weight maximum, so intermediate values
/// cannot overflow even when the mathematical factors would separately.
///
/// Throws DivergenceError when the weight cannot dominate the integrand at an
/// infinite endpoint, AccuracyError when max_subdivisions is exhausted.
double weighted_integral(const std::function<double(double)>& g,
                         ExtendedReal lo, ExtendedReal hi, double rate,
                         double eps, const QuadratureSettings& s = {});

/// Root of a continuous function with a sign change on [lo, hi], located to
/// the absolute bracket width `tol` by a deterministic secant/bisection
/// hybrid.  Intended for monotone h (the root is then unique); requires
/// h(lo) and h(hi) to have opposite signs (or be zero).
double find_root_monotone(const std::function<double(double)>& h, double lo,
                          double hi, double tol);

/// The zero-screen force of a source at c evaluated at u:
///   u ≥ c:  F(u) = ∫_c^u  f₃(t)·e^{(t−u)/ε} dt,
///   u ≤ c:  F(u) = ∫_u^c  f₃(t)·e^{(u−t)/ε} dt,
/// with c = −∞ using the first branch for every u and c = +∞ the second.
/// Continuity at a finite source: both branches vanish at u = c.
/// For c = ∓∞ this is ε·m″ of the corresponding one-sided tangent family, and
/// the sum of the two infinite-source forces equals the convolution of f‴
/// with the two-sided exponential weight.
double convolve_force(const std::function<double(double)>& f3, ExtendedReal c,
                      double u, double eps, const QuadratureSettings& s = {});

}  // namespace bellman

#endif  // BELLMAN_NUMERICS_HPP
