// SPDX-License-Identifier: MIT
#ifndef BELLMAN_GEOMETRY_HPP
#define BELLMAN_GEOMETRY_HPP

#include <limits>

namespace bellman {

/// The real line extended by the two IEEE infinities.  Interval endpoints,
/// tangent parameters and pattern points may all be ±∞; IEEE ordering and
/// exponential arithmetic give the intended limits, so no wrapper type is
/// used.
using ExtendedReal = double;

inline constexpr ExtendedReal kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr ExtendedReal kPosInf = std::numeric_limits<double>::infinity();

/// Whether `t` is a finite real (neither infinity nor NaN).
bool is_finite(ExtendedReal t);

/// A point of the moment plane (x₁, x₂) = (⟨φ⟩, ⟨φ²⟩).
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Which of the two one-parameter tangent families a figure belongs to:
/// Right-family segments run from the upper parabola down-right to the lower
/// parabola; Left-family segments run down-left.
enum class Side { Right, Left };

/// Location of a point relative to the parabolic strip
///   Ω = { x₁² ≤ x₂ ≤ x₁² + ε² }.
enum class StripLocation { Interior, LowerBoundary, UpperBoundary, Outside };

/// A straight segment of the moment plane.
struct Segment {
  Point p;
  Point q;
};

/// A non-vertical straight line x₂ = slope·x₁ + intercept.
struct ChordLine {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Classify `x` against the strip of width ε² over the parabola x₂ = x₁².
/// Boundary membership uses the absolute tolerance 1e-12·(1 + x₁²) so that
/// classification is stable under the quadratic growth of both boundaries.
StripLocation classify(Point x, double eps);

/// Parameter u of the unique tangent-family segment through `x`.
///
/// For the Right family the segment with parameter u lies on the line
/// x₂ − 2(u−ε)x₁ + u² − 2uε = 0 and spans x₁ ∈ [u−ε, u]; the Left family is
/// its mirror with span [u, u+ε].  For interior x,
///   u_R = x₁ + ε − √(ε² − (x₂ − x₁²)),  u_L = x₁ − ε + √(ε² − (x₂ − x₁²)).
/// The square-root argument is clamped to zero when it is ≥ −1e-12·(1+x₁²)
/// (round-off on the upper boundary); points genuinely outside the strip are
/// a precondition violation.
double u_tangent(Point x, Side side, double eps);

/// The full extremal segment with parameter u: from its tangency point on the
/// upper parabola to its endpoint (u, u²) on the lower parabola.  `p` is the
/// upper endpoint, `q` the lower one.
Segment tangent_segment(double u, Side side, double eps);

/// The line through the lower-parabola points (a, a²) and (b, b²):
/// x₂ = (a+b)x₁ − ab.  Requires a ≠ b.
ChordLine chord_line(double a, double b);

/// Signed height of `x` above `line` (positive above).
double height_above(const ChordLine& line, Point x);

}  // namespace bellman

#endif  // BELLMAN_GEOMETRY_HPP
