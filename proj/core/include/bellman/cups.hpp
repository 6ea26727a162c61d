// SPDX-License-Identifier: MIT
#ifndef BELLMAN_CUPS_HPP
#define BELLMAN_CUPS_HPP

#include <memory>
#include <optional>
#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// A one-parameter family of extremal chords growing out of a downward
/// switch point `origin_c` of f‴.  For each length ℓ ∈ (0, ell_max] the chord
/// [a(ℓ), a(ℓ)+ℓ] of the lower parabola satisfies the chord equation
/// ⟨f′⟩ = (f′(a)+f′(b))/2; a(ℓ) decreases, b(ℓ) increases, and the chords
/// sweep the cup region without crossing.  `full` marks families that reach
/// the maximal length 2ε, where the top chord touches the upper parabola at
/// its midpoint.
struct CupFamily {
  double origin_c = 0.0;
  double eps = 0.0;
  double ell_max = 0.0;
  bool full = false;
  std::vector<double> ell_nodes;  ///< tabulated lengths, increasing
  std::vector<double> a_nodes;    ///< left chord ends a(ℓ), decreasing

  /// Left chord end at length ell (monotone-cubic interpolation through the
  /// table; linear closure to (0, origin_c) below the first node).
  double a_of_ell(double ell) const;
  /// Right chord end b(ℓ) = a(ℓ) + ℓ.
  double b_of_ell(double ell) const { return a_of_ell(ell) + ell; }

  std::shared_ptr<const void> interpolant;  ///< opaque pchip handle
};

/// Residual of the chord equation on [a, a+ell]:
///   Φ(a, ℓ) = ℓ·(f′(a) + f′(a+ℓ)) − 2·(f(a+ℓ) − f(a)).
/// Φ = 0 exactly when the chord is extremal; Φ is O(ℓ³) near the origin.
double chord_mismatch(const BoundaryFunction& f, double a, double ell);

/// Chord-end defects of f″ against its mean over [a, b]:
///   d_left = f″(a) − ⟨f″⟩,  d_right = f″(b) − ⟨f″⟩.
/// Both are strictly negative along a valid cup; they drive the continuation
/// predictor da/dℓ = −d_right/(d_left + d_right) and the screen amplitudes of
/// the force calculus.
struct ChordDifferentials {
  double d_left = 0.0;
  double d_right = 0.0;
};
ChordDifferentials differentials(const BoundaryFunction& f, double a, double b);

/// Grow the chord family at `origin_c` up to length 2ε by predictor–corrector
/// continuation (table spacing at most 2ε/256, geometric refinement near the
/// origin).  Growth stops early — `full = false` — if a chord end would cross
/// a neighbouring upward switch point or a defect loses its strict sign;
/// callers treat a non-full cup as a construction failure.
CupFamily grow_cup(const BoundaryFunction& f, double origin_c, double eps);

/// Polish a tabulated left end so the chord of length `ell` anchored at the
/// result satisfies Φ = 0 to near machine precision.  The family table is
/// interpolated, which is fine for sweeping chords through points but not for
/// identities that consume the end points directly (screen-end anchors,
/// straight-figure coefficients); a few safeguarded Newton steps on the exact
/// residual close that gap.  Returns the best iterate found.
double refine_chord_left_end(const BoundaryFunction& f, double a, double ell);

/// Length of the extremal chord through x, or nullopt when x is not in the
/// cup region.  The sweep height is monotone in ℓ, so the chord is located by
/// bisection to `tol` in ℓ; points within tolerance of the top chord resolve
/// into the cup ("ties → cup").
std::optional<double> locate_chord(const CupFamily& cup, Point x,
                                   double tol = 1e-11);

/// Candidate value at a cup point: linear interpolation of f along the chord
/// through x.  Precondition: locate_chord(cup, x) is engaged.
double eval_cup(const CupFamily& cup, const BoundaryFunction& f, Point x);

}  // namespace bellman

#endif  // BELLMAN_CUPS_HPP
