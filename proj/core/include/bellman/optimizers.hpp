// SPDX-License-Identifier: MIT
#ifndef BELLMAN_OPTIMIZERS_HPP
#define BELLMAN_OPTIMIZERS_HPP

#include <variant>
#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/candidate.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// φ(s) = value on [lo, hi].
struct ConstantPiece {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

/// φ(s) = value + ε·log((s − pole)/(anchor − pole)) on [lo, hi], pole ≤ lo.
/// Non-decreasing; unbounded below when lo = pole (integrable singularity).
struct LogRampUpPiece {
  double lo = 0.0;
  double hi = 0.0;
  double pole = 0.0;
  double anchor = 0.0;
  double value = 0.0;  ///< φ(anchor)
  double eps = 0.0;
};

/// φ(s) = value − ε·log((pole − s)/(pole − anchor)) on [lo, hi], pole ≥ hi.
/// Non-decreasing; unbounded above when hi = pole.
struct LogRampDownPiece {
  double lo = 0.0;
  double hi = 0.0;
  double pole = 0.0;
  double anchor = 0.0;
  double value = 0.0;  ///< φ(anchor)
  double eps = 0.0;
};

using Piece = std::variant<ConstantPiece, LogRampUpPiece, LogRampDownPiece>;

/// A test function on [0,1] given by contiguous pieces.
struct TestFunction {
  std::vector<Piece> pieces;
};

double piece_lo(const Piece& p);
double piece_hi(const Piece& p);

/// Value φ(s); −∞/+∞ at a ramp pole.
double phi_value(const TestFunction& phi, double s);

/// (⟨φ⟩, ⟨φ²⟩, ⟨f∘φ⟩) over [0,1].
struct MomentTriple {
  double m1 = 0.0;
  double m2 = 0.0;
  double mf = 0.0;
};

/// Test function realizing the candidate value at x: its moments are
/// (x₁, x₂, eval(x)) and its BMO norm is ε.  Recipe by figure: lower-boundary
/// point → constant; tangent-domain point → entry curve compressed onto the
/// segment fraction followed by the constant foot value; cup point →
/// two-value step in chord proportions; angle point → concatenation of the
/// two side recipes along the slope-2x₁ line through x; trolleybus point →
/// transit through the screen-end corner with two constant steps.
TestFunction build_optimizer(Point x, const Foliation& fol,
                             const BoundaryFunction& f);

/// Moments by exact closed forms for ⟨φ⟩ and ⟨φ²⟩ (log antiderivatives) and
/// substitution t = φ(s) for ⟨f∘φ⟩ (ramps turn into weighted integrals of f).
MomentTriple moments(const TestFunction& phi, const BoundaryFunction& f);

/// Grid supremum of the window variance sup_J ⟨φ²⟩_J − ⟨φ⟩²_J, returned as
/// its square root.  Window endpoints run over all piece boundaries plus
/// `resolution` graded points per piece (geometric grading toward ramp
/// poles); prefix integrals at the endpoints are exact, so windows touching
/// a pole carry the full singular mass.
double bmo_norm(const TestFunction& phi, int resolution);

/// Clamp φ into [c, d]; pieces are re-segmented at the (at most one per
/// piece) crossing of each level, located exactly by inverting the ramp.
TestFunction truncate(const TestFunction& phi, double c, double d);

}  // namespace bellman

#endif  // BELLMAN_OPTIMIZERS_HPP
