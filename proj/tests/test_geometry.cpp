// SPDX-License-Identifier: MIT
#include <cmath>
#include <random>

#include "bellman/geometry.hpp"
#include "doctest.h"

using namespace bellman;

TEST_SUITE("geometry") {

TEST_CASE("classify places points relative to the strip") {
  const double eps = 0.7;
  const double a = 1.3;
  CHECK(classify({a, a * a}, eps) == StripLocation::LowerBoundary);
  CHECK(classify({a, a * a + eps * eps}, eps) == StripLocation::UpperBoundary);
  CHECK(classify({a, a * a + 0.5 * eps * eps}, eps) ==
        StripLocation::Interior);
  CHECK(classify({a, a * a - 0.1}, eps) == StripLocation::Outside);
  CHECK(classify({a, a * a + 1.1 * eps * eps}, eps) == StripLocation::Outside);
}

TEST_CASE("tangency parameters at a frozen interior point") {
  CHECK(u_tangent({0.0, 0.75}, Side::Right, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u_tangent({0.0, 0.75}, Side::Left, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("tangency parameter collapses below and spreads above") {
  const double eps = 0.4;
  for (double a : {-2.0, 0.3, 5.0}) {
    CHECK(u_tangent({a, a * a}, Side::Right, eps) == doctest::Approx(a));
    CHECK(u_tangent({a, a * a}, Side::Left, eps) == doctest::Approx(a));
    CHECK(u_tangent({a, a * a + eps * eps}, Side::Right, eps) ==
          doctest::Approx(a + eps));
    CHECK(u_tangent({a, a * a + eps * eps}, Side::Left, eps) ==
          doctest::Approx(a - eps));
  }
}

TEST_CASE("interior points satisfy their own tangent-line equations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> abscissa(-3.0, 3.0);
  std::uniform_real_distribution<double> height(0.05, 0.95);
  const double eps = 0.8;
  for (int k = 0; k < 200; ++k) {
    const double x1 = abscissa(rng);
    const Point x{x1, x1 * x1 + height(rng) * eps * eps};
    const double ur = u_tangent(x, Side::Right, eps);
    const double ul = u_tangent(x, Side::Left, eps);
    // Right-tangent line at u: x₂ = 2(u−ε)x₁ − u² + 2uε; the left one is the
    // mirror through u ↦ −u, x₁ ↦ −x₁.
    CHECK(std::abs(x.x2 - (2.0 * (ur - eps) * x.x1 - ur * ur + 2.0 * ur * eps)) <=
          1e-10 * (1.0 + x.x2));
    CHECK(std::abs(x.x2 - (2.0 * (ul + eps) * x.x1 - ul * ul - 2.0 * ul * eps)) <=
          1e-10 * (1.0 + x.x2));
    // The point lies inside the horizontal span of its own segment.
    CHECK(x.x1 >= ur - eps - 1e-12);
    CHECK(x.x1 <= ur + 1e-12);
    CHECK(x.x1 >= ul - 1e-12);
    CHECK(x.x1 <= ul + eps + 1e-12);
  }
}

TEST_CASE("tangent segments run from the upper boundary to the touch point") {
  const double eps = 0.6;
  for (double u : {-1.5, 0.0, 2.2}) {
    const Segment r = tangent_segment(u, Side::Right, eps);
    CHECK(r.q.x1 == doctest::Approx(u));
    CHECK(r.q.x2 == doctest::Approx(u * u));
    CHECK(r.p.x1 == doctest::Approx(u - eps));
    CHECK(r.p.x2 == doctest::Approx((u - eps) * (u - eps) + eps * eps));
    const Segment l = tangent_segment(u, Side::Left, eps);
    CHECK(l.q.x1 == doctest::Approx(u));
    CHECK(l.q.x2 == doctest::Approx(u * u));
    CHECK(l.p.x1 == doctest::Approx(u + eps));
    CHECK(l.p.x2 == doctest::Approx((u + eps) * (u + eps) + eps * eps));
  }
}

TEST_CASE("chords interpolate the parabola and dip below it in between") {
  const double a = -0.7;
  const double b = 1.9;
  const ChordLine line = chord_line(a, b);
  CHECK(std::abs(height_above(line, {a, a * a})) <= 1e-12);
  CHECK(std::abs(height_above(line, {b, b * b})) <= 1e-12);
  const double m = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Parabola points between the ends sit below the chord, deepest at the
  // midpoint where the gap is the squared half-length.
  CHECK(height_above(line, {m, m * m}) ==
        doctest::Approx(-half * half).epsilon(1e-12));
}

TEST_CASE("a chord stays inside the strip exactly when it spans at most 2*eps") {
  const double eps = 0.5;
  const double mid = 0.3;
  for (double half : {0.2, 0.5, 0.50001, 0.7}) {
    const double a = mid - half;
    const double b = mid + half;
    const ChordLine line = chord_line(a, b);
    const Point top{mid, line.slope * mid + line.intercept};
    if (half <= eps) {
      CHECK(classify(top, eps) != StripLocation::Outside);
    } else {
      CHECK(classify(top, eps) == StripLocation::Outside);
    }
  }
}

}  // TEST_SUITE("geometry")
