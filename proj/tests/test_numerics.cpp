// SPDX-License-Identifier: MIT
#include <cmath>

#include "bellman/errors.hpp"
#include "bellman/geometry.hpp"
#include "bellman/numerics.hpp"
#include "doctest.h"

using namespace bellman;

TEST_SUITE("numerics") {

TEST_CASE("weighted integral reproduces an exponential tail in closed form") {
  // ∫_u^∞ e^t · e^{−2t} dt = e^{−u}.
  for (double u : {-1.0, 0.0, 1.0}) {
    const double got = weighted_integral([](double t) { return std::exp(t); },
                                         u, kPosInf, -2.0, 1.0);
    CHECK(got == doctest::Approx(std::exp(-u)).epsilon(1e-10));
  }
}

TEST_CASE("weighted integral is additive over adjacent ranges") {
  const auto g = [](double t) { return std::cos(t); };
  const double rate = -1.0;
  const double eps = 0.7;
  const double whole = weighted_integral(g, -1.0, 5.0, rate, eps);
  const double left = weighted_integral(g, -1.0, 0.4, rate, eps);
  const double right = weighted_integral(g, 0.4, 5.0, rate, eps);
  CHECK(std::abs(whole - (left + right)) <= 1e-12 * (1.0 + std::abs(whole)));
}

TEST_CASE("weighted integral is deterministic") {
  const auto g = [](double t) { return std::sin(3.0 * t) + t * t; };
  const double first = weighted_integral(g, -2.0, kPosInf, -1.5, 0.9);
  const double second = weighted_integral(g, -2.0, kPosInf, -1.5, 0.9);
  CHECK(first == second);
}

TEST_CASE("kinks declared as split points are integrated exactly") {
  // ∫_{−1}^{1} |t| dt = 1 with a kink seeded on a panel boundary.
  QuadratureSettings s;
  s.split_points = {0.0};
  const double got = weighted_integral([](double t) { return std::abs(t); },
                                       -1.0, 1.0, 0.0, 1.0, s);
  CHECK(got == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("a weight that cannot dominate the integrand raises a divergence error") {
  CHECK_THROWS_AS(weighted_integral([](double t) { return std::exp(2.0 * t); },
                                    0.0, kPosInf, -1.0, 1.0),
                  DivergenceError);
}

TEST_CASE("an exhausted subdivision budget raises an accuracy error") {
  QuadratureSettings s;
  s.max_subdivisions = 1;
  CHECK_THROWS_AS(
      weighted_integral([](double t) { return std::sin(50.0 * t); }, 0.0, 10.0,
                        0.0, 1.0, s),
      AccuracyError);
}

TEST_CASE("monotone root finder locates roots and rejects bad brackets") {
  const auto h = [](double t) { return t * t - 2.0; };
  CHECK(find_root_monotone(h, 0.0, 2.0, 1e-13) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // A zero endpoint is an acceptable bracket.
  const auto z = [](double t) { return t; };
  CHECK(find_root_monotone(z, 0.0, 1.0, 1e-13) == doctest::Approx(0.0));
  CHECK_THROWS_AS(
      find_root_monotone([](double t) { return 1.0 + t * t; }, 0.0, 1.0, 1e-13),
      AccuracyError);
}

TEST_CASE("zero-screen force of a finite source vanishes at the source") {
  const auto f3 = [](double t) { return t * t - 1.3; };
  CHECK(convolve_force(f3, 0.4, 0.4, 0.8) == doctest::Approx(0.0));
}

TEST_CASE("cube force from the left end has the two-regime closed form") {
  // f‴ = 6·sign(t): the force from −∞ is −6ε for u ≤ 0 and ε(6 − 12e^{−u/ε})
  // for u > 0.
  QuadratureSettings s;
  s.split_points = {0.0};
  const auto f3 = [](double t) { return t >= 0.0 ? 6.0 : -6.0; };
  for (double eps : {0.5, 1.0}) {
    for (double u : {-2.0, -0.3, 0.0}) {
      CHECK(convolve_force(f3, kNegInf, u, eps, s) ==
            doctest::Approx(-6.0 * eps).epsilon(1e-10));
    }
    for (double u : {0.5, 2.0}) {
      const double want = eps * (6.0 - 12.0 * std::exp(-u / eps));
      CHECK(convolve_force(f3, kNegInf, u, eps, s) ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("quadratic force from the right end matches its polynomial form") {
  // f‴ = t² − d: ∫_u^∞ (t²−d)·e^{(u−t)/ε} dt = ε(u² + 2εu + 2ε² − d).
  const double d = 1.3;
  const auto f3 = [d](double t) { return t * t - d; };
  for (double eps : {0.5, 1.0}) {
    for (double u : {-1.5, 0.0, 2.0}) {
      const double want = eps * (u * u + 2.0 * eps * u + 2.0 * eps * eps - d);
      CHECK(convolve_force(f3, kPosInf, u, eps) ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE("numerics")
