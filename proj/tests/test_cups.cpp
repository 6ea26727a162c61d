// SPDX-License-Identifier: MIT
#include <cmath>

#include "bellman/cups.hpp"
#include "bellman/geometry.hpp"
#include "bellman/registry.hpp"
#include "doctest.h"

using namespace bellman;

namespace {

/// Exact left chord end of the quintic family: the chord equation reduces to
/// 3a² + 4ab + 3b² = 10d, whence a(ℓ) = −ℓ/2 − √(100d − 5ℓ²)/10.
double quintic_left_end(double d, double ell) {
  return -0.5 * ell - std::sqrt(100.0 * d - 5.0 * ell * ell) / 10.0;
}

}  // namespace

TEST_SUITE("cups") {

TEST_CASE("chord mismatch of the quintic matches its polynomial closed form") {
  const double d = 1.3;
  const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
  for (double a : {-2.0, -1.4, -1.1}) {
    for (double ell : {0.3, 0.9, 1.6}) {
      const double b = a + ell;
      const double want = std::pow(b - a, 3) *
                          (3.0 * a * a + 4.0 * a * b + 3.0 * b * b - 10.0 * d) /
                          60.0;
      CHECK(chord_mismatch(f, a, ell) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("the quintic chord family lands on its closed-form left end") {
  SUBCASE("interior length") {
    const double d = 1.0;
    const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
    const CupFamily cup = grow_cup(f, -std::sqrt(d), 1.0);
    REQUIRE(cup.full);
    const double table = cup.a_of_ell(0.5);
    const double polished = refine_chord_left_end(f, table, 0.5);
    CHECK(polished == doctest::Approx(quintic_left_end(d, 0.5)).epsilon(1e-9));
    // The raw table is only interpolation-accurate; document that level.
    CHECK(std::abs(table - polished) <= 2e-6);
  }
  SUBCASE("top chord") {
    const double d = 4.0;
    const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
    const CupFamily cup = grow_cup(f, -std::sqrt(d), 1.0);
    REQUIRE(cup.full);
    CHECK(cup.ell_max == doctest::Approx(2.0).epsilon(1e-12));
    const double a_top = refine_chord_left_end(f, cup.a_of_ell(2.0), 2.0);
    CHECK(a_top == doctest::Approx(quintic_left_end(d, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("table nodes solve the chord equation and are densely spaced") {
  const BoundaryFunction f = make_builtin("quartic-", {{"c", 0.3}});
  const double eps = 0.7;
  const CupFamily cup = grow_cup(f, 0.3, eps);
  REQUIRE(cup.full);
  REQUIRE(cup.ell_nodes.size() >= 4);
  REQUIRE(cup.ell_nodes.size() == cup.a_nodes.size());
  for (std::size_t i = 0; i < cup.ell_nodes.size(); ++i) {
    CHECK(std::abs(chord_mismatch(f, cup.a_nodes[i], cup.ell_nodes[i])) <=
          1e-11);
    if (i > 0) {
      CHECK(cup.ell_nodes[i] > cup.ell_nodes[i - 1]);
      CHECK(cup.ell_nodes[i] - cup.ell_nodes[i - 1] <=
            2.0 * eps / 256.0 + 1e-12);
      CHECK(cup.a_nodes[i] < cup.a_nodes[i - 1]);
    }
  }
}

TEST_CASE("chord-end derivatives balance the f''-defects along the table") {
  const double d = 1.3;
  const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
  const CupFamily cup = grow_cup(f, -std::sqrt(d), 1.0);
  const double h = 1e-5;
  for (double ell : {0.2, 0.7, 1.3, 1.8}) {
    const auto left_end = [&](double l) {
      return refine_chord_left_end(f, cup.a_of_ell(l), l);
    };
    const double a_prime = (left_end(ell + h) - left_end(ell - h)) / (2.0 * h);
    const double b_prime = 1.0 + a_prime;
    // Continuation direction: −1 < a′ < 0 < b′.
    CHECK(a_prime > -1.0);
    CHECK(a_prime < 0.0);
    CHECK(b_prime > 0.0);
    const double a = left_end(ell);
    const ChordDifferentials dd = differentials(f, a, a + ell);
    // Both defects stay strictly negative along a valid cup.
    CHECK(dd.d_left < 0.0);
    CHECK(dd.d_right < 0.0);
    const double resid = dd.d_right * b_prime + dd.d_left * a_prime;
    CHECK(std::abs(resid) <=
          1e-8 * (1.0 + std::abs(dd.d_right * b_prime)));
  }
}

TEST_CASE("consecutive chords never cross inside the strip") {
  const BoundaryFunction f = make_builtin("quartic-", {{"c", -0.4}});
  const CupFamily cup = grow_cup(f, -0.4, 0.5);
  for (std::size_t i = 1; i < cup.ell_nodes.size(); ++i) {
    const double a_in = cup.a_nodes[i - 1];
    const double b_in = a_in + cup.ell_nodes[i - 1];
    const ChordLine outer =
        chord_line(cup.a_nodes[i], cup.a_nodes[i] + cup.ell_nodes[i]);
    // The longer chord passes strictly above both ends of the shorter one,
    // and line differences are affine, so no interior crossing is possible.
    CHECK(height_above(outer, {a_in, a_in * a_in}) > 0.0);
    CHECK(height_above(outer, {b_in, b_in * b_in}) > 0.0);
  }
}

TEST_CASE("growth stops early when the family hits a structural obstruction") {
  const double d = 0.09;
  const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
  const CupFamily cup = grow_cup(f, -std::sqrt(d), 1.0);
  CHECK(!cup.full);
  CHECK(cup.ell_max < 2.0 - 1e-9);
  // The family cannot mathematically continue past the discriminant death of
  // its chord equation at ℓ = √(20d).
  CHECK(cup.ell_max <= std::sqrt(20.0 * d) + 1e-6);
}

TEST_CASE("chord location engages exactly on the cup region") {
  const double c = 0.3;
  const double eps = 1.0;
  const BoundaryFunction f = make_builtin("quartic-", {{"c", c}});
  const CupFamily cup = grow_cup(f, c, eps);
  SUBCASE("centre points pick the symmetric chord") {
    for (double sigma : {0.1, 0.45, 0.8}) {
      const auto ell = locate_chord(cup, {c, c * c + sigma * sigma});
      REQUIRE(ell.has_value());
      CHECK(*ell == doctest::Approx(2.0 * sigma).epsilon(1e-8));
    }
  }
  SUBCASE("points outside the sweep are rejected") {
    CHECK(!locate_chord(cup, {c + 2.0 * eps, (c + 2.0 * eps) *
                                                 (c + 2.0 * eps) +
                                             0.1 * eps * eps})
               .has_value());
    // Just above the top chord near its left end: inside the strip, but in
    // the adjacent tangent domain rather than under the chord sweep.
    const double a_top = cup.a_of_ell(2.0 * eps);
    const ChordLine top = chord_line(a_top, a_top + 2.0 * eps);
    const double x1 = a_top + 0.05;
    const Point x{x1, top.slope * x1 + top.intercept + 1e-4};
    REQUIRE(classify(x, eps) == StripLocation::Interior);
    CHECK(!locate_chord(cup, x).has_value());
  }
}

TEST_CASE("cup values interpolate f linearly along chords") {
  const double c = 0.3;
  const BoundaryFunction f = make_builtin("quartic-", {{"c", c}});
  const CupFamily cup = grow_cup(f, c, 1.0);
  SUBCASE("centre points reproduce the depth-four power") {
    for (double sigma : {0.1, 0.5, 0.9}) {
      const double got = eval_cup(cup, f, {c, c * c + sigma * sigma});
      CHECK(std::abs(got + sigma * sigma * sigma * sigma) <= 1e-9);
    }
  }
  SUBCASE("off-centre points split the chord affinely") {
    const double a = c - 0.5;
    const double b = c + 0.5;
    for (double theta : {0.25, 0.6}) {
      const double x1 = a + theta * (b - a);
      const ChordLine line = chord_line(a, b);
      const double got =
          eval_cup(cup, f, {x1, line.slope * x1 + line.intercept});
      const double want = f.f(a) + theta * (f.f(b) - f.f(a));
      CHECK(std::abs(got - want) <= 1e-9 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("the x2-derivative over a cup is half the mean of f''") {
  const double c = 0.3;
  const BoundaryFunction f = make_builtin("quartic-", {{"c", c}});
  const CupFamily cup = grow_cup(f, c, 1.0);
  const double sigma = 0.35;
  const Point x{c, c * c + sigma * sigma};
  const double h = 1e-6;
  const double num = (eval_cup(cup, f, {x.x1, x.x2 + h}) -
                      eval_cup(cup, f, {x.x1, x.x2 - h})) /
                     (2.0 * h);
  const double a = c - sigma;
  const double b = c + sigma;
  const double want = (f.f1(b) - f.f1(a)) / (2.0 * (b - a));
  CHECK(std::abs(num - want) <= 1e-6 * (1.0 + std::abs(want)));
}

TEST_CASE("polishing a left end never worsens the chord residual") {
  const double d = 1.5;
  const BoundaryFunction f = make_builtin("quintic", {{"d", d}});
  const CupFamily cup = grow_cup(f, -std::sqrt(d), 1.0);
  for (double ell : {0.31, 0.87, 1.53, 1.98}) {
    const double raw = cup.a_of_ell(ell);
    const double polished = refine_chord_left_end(f, raw, ell);
    CHECK(std::abs(chord_mismatch(f, polished, ell)) <=
          std::abs(chord_mismatch(f, raw, ell)) + 1e-15);
    CHECK(std::abs(chord_mismatch(f, polished, ell)) <= 1e-12);
  }
}

}  // TEST_SUITE("cups")
