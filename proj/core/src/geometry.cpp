// SPDX-License-Identifier: MIT
#include "bellman/geometry.hpp"

#include <cmath>

#include "bellman/errors.hpp"

namespace bellman {

namespace {

/// Classification tolerance at abscissa x1 (grows with the boundary values).
double boundary_tol(double x1) { return 1e-12 * (1.0 + x1 * x1); }

}  // namespace

bool is_finite(ExtendedReal t) { return std::isfinite(t); }

StripLocation classify(Point x, double eps) {
  const double depth = x.x2 - x.x1 * x.x1;  // height above the lower parabola
  const double tol = boundary_tol(x.x1);
  if (depth < -tol || depth > eps * eps + tol) return StripLocation::Outside;
  if (depth <= tol) return StripLocation::LowerBoundary;
  if (depth >= eps * eps - tol) return StripLocation::UpperBoundary;
  return StripLocation::Interior;
}

double u_tangent(Point x, Side side, double eps) {
  const double depth = x.x2 - x.x1 * x.x1;
  if (depth <= 0.0) {
    if (depth < -boundary_tol(x.x1)) {
      throw AccuracyError("u_tangent: point below the lower parabola");
    }
    // Lower-boundary collapse: the segment degenerates to the point itself,
    // and the exact return keeps eval_tangent(x) = f(x₁) free of roundoff.
    return x.x1;
  }
  double arg = eps * eps - depth;
  if (arg < 0.0) {
    if (arg < -boundary_tol(x.x1)) {
      throw AccuracyError("u_tangent: point above the upper parabola");
    }
    arg = 0.0;
  }
  const double offset = eps - std::sqrt(arg);  // ∈ [0, ε] inside the strip
  return side == Side::Right ? x.x1 + offset : x.x1 - offset;
}

Segment tangent_segment(double u, Side side, double eps) {
  const double w = side == Side::Right ? u - eps : u + eps;  // tangency abscissa
  return Segment{Point{w, w * w + eps * eps}, Point{u, u * u}};
}

ChordLine chord_line(double a, double b) {
  if (a == b) throw AccuracyError("chord_line: degenerate chord (a == b)");
  return ChordLine{a + b, -a * b};
}

double height_above(const ChordLine& line, Point x) {
  return x.x2 - (line.slope * x.x1 + line.intercept);
}

}  // namespace bellman
