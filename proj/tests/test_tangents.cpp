// SPDX-License-Identifier: MIT
#include <cmath>
#include <vector>

#include "bellman/candidate.hpp"
#include "bellman/registry.hpp"
#include "bellman/tangents.hpp"
#include "doctest.h"

using namespace bellman;

namespace {

/// Central-difference derivative of the slope coefficient.
double central_m_prime(const TangentCoefficient& coeff, double u, double h) {
  return (coeff.m_value(u + h) - coeff.m_value(u - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("tangents") {

TEST_CASE("slope coefficients satisfy their defining equation") {
  const double h = 1e-5;
  SUBCASE("left family from the right infinity") {
    const BoundaryFunction f = make_builtin("exp+");
    const double eps = 0.5;
    TangentCoefficient coeff(Side::Left, Anchor::from_infinity(), f, eps);
    for (double u = -2.0; u <= 3.0; u += 0.25) {
      const double res = -eps * central_m_prime(coeff, u, h) +
                         coeff.m_value(u) - f.f1(u);
      CHECK(std::abs(res) <= 1e-8 * (1.0 + std::abs(f.f1(u))));
    }
  }
  SUBCASE("right family from the left infinity") {
    const BoundaryFunction f = make_builtin("exp-");
    const double eps = 0.5;
    TangentCoefficient coeff(Side::Right, Anchor::from_infinity(), f, eps);
    for (double u = -3.0; u <= 2.0; u += 0.25) {
      const double res = eps * central_m_prime(coeff, u, h) +
                         coeff.m_value(u) - f.f1(u);
      CHECK(std::abs(res) <= 1e-8 * (1.0 + std::abs(f.f1(u))));
    }
  }
}

TEST_CASE("exponential and cubic slope coefficients match closed forms") {
  SUBCASE("growing exponential, left family") {
    const double eps = 0.5;
    TangentCoefficient coeff(Side::Left, Anchor::from_infinity(),
                             make_builtin("exp+"), eps);
    for (double u : {-1.0, 0.0, 2.0}) {
      CHECK(coeff.m_value(u) ==
            doctest::Approx(std::exp(u) / (1.0 - eps)).epsilon(1e-10));
    }
  }
  SUBCASE("decaying exponential, right family") {
    const double eps = 0.5;
    TangentCoefficient coeff(Side::Right, Anchor::from_infinity(),
                             make_builtin("exp-"), eps);
    for (double u : {-2.0, 0.0, 1.0}) {
      CHECK(coeff.m_value(u) ==
            doctest::Approx(-std::exp(-u) / (1.0 - eps)).epsilon(1e-10));
    }
  }
  SUBCASE("cubic, left family, two radii") {
    for (double eps : {0.5, 1.0}) {
      TangentCoefficient coeff(Side::Left, Anchor::from_infinity(),
                               make_builtin("cubic+"), eps);
      for (double u : {-1.5, 0.0, 2.0}) {
        const double want = 6.0 * eps * eps + 3.0 * u * u + 6.0 * eps * u;
        CHECK(coeff.m_value(u) == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("screen-end anchors take the documented boundary values") {
  const BoundaryFunction f = make_builtin("cubic+");
  const double eps = 0.8;
  const double a0 = -1.0;
  const double b0 = 0.5;
  const double mean2 = (f.f1(b0) - f.f1(a0)) / (b0 - a0);
  TangentCoefficient right(Side::Right, Anchor::screen_end(a0, b0), f, eps);
  TangentCoefficient left(Side::Left, Anchor::screen_end(a0, b0), f, eps);
  CHECK(right.m_value(b0) ==
        doctest::Approx(f.f1(b0) - eps * mean2).epsilon(1e-10));
  CHECK(left.m_value(a0) ==
        doctest::Approx(f.f1(a0) + eps * mean2).epsilon(1e-10));
}

TEST_CASE("the x2-derivative is constant along a tangent segment") {
  const BoundaryFunction f = make_builtin("exp+");
  const double eps = 0.5;
  TangentCoefficient coeff(Side::Left, Anchor::from_infinity(), f, eps);
  for (double u : {-0.8, 0.3, 1.4}) {
    // Two interior points of the same segment: x₁ between u and u + ε on the
    // left-tangent line x₂ = 2(u+ε)x₁ − u² − 2uε.
    double slopes[2];
    int i = 0;
    for (double frac : {0.25, 0.75}) {
      const double x1 = u + frac * eps;
      const double x2 = 2.0 * (u + eps) * x1 - u * u - 2.0 * u * eps;
      const double h = 1e-6;
      const double up = eval_tangent(coeff, f, {x1, x2 + h});
      const double dn = eval_tangent(coeff, f, {x1, x2 - h});
      slopes[i++] = (up - dn) / (2.0 * h);
    }
    const double want = coeff.m_derivative(u) / 2.0;
    CHECK(std::abs(slopes[0] - slopes[1]) <= 1e-7 * (1.0 + std::abs(want)));
    CHECK(std::abs(slopes[0] - want) <= 1e-7 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("second derivatives carry the concavity sign inside foliation domains") {
  struct Entry {
    const char* name;
    std::map<std::string, double> params;
    double eps;
  };
  const std::vector<Entry> roster = {{"exp+", {}, 0.5},
                                     {"exp-", {}, 0.5},
                                     {"quintic", {{"d", 1.3}}, 1.0},
                                     {"two-exp", {{"alpha", 2.0}}, 0.5}};
  for (const auto& entry : roster) {
    CAPTURE(entry.name);
    const BoundaryFunction f = make_builtin(entry.name, entry.params);
    const Foliation fol = build_foliation(f, entry.eps);
    for (const auto& fig : fol.figures) {
      const auto* dom = std::get_if<TangentDomain>(&fig);
      if (dom == nullptr) continue;
      const double fallback = 5.0;
      const double lo = is_finite(dom->u_lo)
                            ? dom->u_lo
                            : (is_finite(dom->u_hi) ? dom->u_hi - 8.0 * entry.eps
                                                    : -fallback);
      const double hi = is_finite(dom->u_hi)
                            ? dom->u_hi
                            : (is_finite(dom->u_lo) ? dom->u_lo + 8.0 * entry.eps
                                                    : fallback);
      for (int k = 0; k < 200; ++k) {
        const double u = lo + (hi - lo) * k / 199.0;
        const double m2 = dom->coeff.m_second(u);
        const double slack = 1e-9 * (1.0 + std::abs(m2));
        if (dom->side == Side::Left) {
          CHECK(m2 >= -slack);
        } else {
          CHECK(m2 <= slack);
        }
      }
    }
  }
}

TEST_CASE("tangent evaluation collapses to f on the lower boundary") {
  const BoundaryFunction f = make_builtin("exp+");
  TangentCoefficient coeff(Side::Left, Anchor::from_infinity(), f, 0.5);
  for (double a : {-1.7, 0.0, 0.3, 2.9}) {
    CHECK(eval_tangent(coeff, f, {a, a * a}) == f.f(a));
  }
}

TEST_CASE("the checkpoint cache agrees with direct evaluation") {
  const BoundaryFunction f = make_builtin("two-exp", {{"alpha", 2.0}});
  const double eps = 0.5;
  TangentCoefficient coeff(Side::Left, Anchor::from_infinity(), f, eps);
  coeff.prime(-2.0, 3.0);
  for (int k = 0; k <= 100; ++k) {
    const double u = -2.0 + 5.0 * k / 100.0;
    const double direct =
        m_value_direct(Side::Left, Anchor::from_infinity(), f, eps, u);
    CHECK(std::abs(coeff.m_value(u) - direct) <=
          1e-10 * (1.0 + std::abs(direct)));
    const double direct2 =
        m_second_direct(Side::Left, Anchor::from_infinity(), f, eps, u);
    CHECK(std::abs(coeff.m_second(u) - direct2) <=
          1e-10 * (1.0 + std::abs(direct2)));
  }
}

TEST_CASE("a free constant adds a decaying homogeneous mode") {
  const BoundaryFunction f = make_builtin("cubic+");
  const double eps = 0.7;
  const double at = 0.4;
  const double amplitude = 0.25;
  TangentCoefficient free_coeff(
      Side::Right, Anchor::free_constant(amplitude, at), f, eps);
  TangentCoefficient base(Side::Right, Anchor::from_infinity(), f, eps);
  // At the anchor the mode equals its amplitude.
  CHECK(free_coeff.m_value(at) - base.m_value(at) ==
        doctest::Approx(amplitude).epsilon(1e-10));
  // The defining equation still holds (the added mode is homogeneous).
  for (double u : {-0.5, 1.2}) {
    const double res = eps * central_m_prime(free_coeff, u, 1e-5) +
                       free_coeff.m_value(u) - f.f1(u);
    CHECK(std::abs(res) <= 1e-8 * (1.0 + std::abs(f.f1(u))));
  }
  // Three radii to the right, the mode has decayed by e^{−3}.
  const double u = at + 3.0 * eps;
  CHECK(free_coeff.m_value(u) - base.m_value(u) ==
        doctest::Approx(amplitude * std::exp(-3.0)).epsilon(1e-8));
}

}  // TEST_SUITE("tangents")
