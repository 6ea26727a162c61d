// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/candidate.hpp"
#include "bellman/errors.hpp"
#include "bellman/registry.hpp"
#include "doctest.h"

using namespace bellman;

namespace {

struct RosterEntry {
  std::string name;
  std::map<std::string, double> params;
  double eps;
  std::string signature;
};

std::vector<RosterEntry> signature_roster() {
  return {{"exp+", {}, 0.5, "L"},
          {"exp-", {}, 0.5, "R"},
          {"cubic+", {}, 1.0, "L"},
          {"cubic-", {}, 1.0, "R"},
          {"power", {{"p", 3.0}}, 1.0, "RL"},
          {"quartic-", {{"c", 0.3}}, 0.7, "LR"},
          {"quartic+", {{"a", 0.7}}, 0.5, "RL"},
          {"quintic", {{"d", 0.9}}, 1.0, "L"},
          {"quintic", {{"d", 1.3}}, 1.0, "LL"},
          {"quintic", {{"d", 4.0}}, 1.0, "LRL"},
          {"two-exp", {{"alpha", 2.0}}, 0.5, "RL"},
          {"two-exp", {{"alpha", 0.3}}, 0.5, "L"},
          {"example6", {}, 0.5, "RL"}};
}

/// Horizontal span of interest: every finite switch point plus margin.
std::pair<double, double> landmark_span(const BoundaryFunction& f,
                                        double eps, double margin) {
  std::vector<double> landmarks;
  for (double c : f.pattern.c_points) {
    if (is_finite(c)) landmarks.push_back(c);
  }
  for (double v : f.pattern.v_points) landmarks.push_back(v);
  if (landmarks.empty()) landmarks.push_back(0.0);
  const auto [lo, hi] =
      std::minmax_element(landmarks.begin(), landmarks.end());
  return {*lo - margin * eps, *hi + margin * eps};
}

}  // namespace

TEST_SUITE("candidate") {

TEST_CASE("signatures of the built-in regimes") {
  for (const auto& entry : signature_roster()) {
    CAPTURE(entry.name);
    CAPTURE(entry.eps);
    const BoundaryFunction f = make_builtin(entry.name, entry.params);
    const Foliation fol = build_foliation(f, entry.eps);
    CHECK(fol.signature == entry.signature);
  }
}

TEST_CASE("mirroring a function mirrors its signature") {
  const AffineTransform mirror{-1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  const BoundaryFunction g13 =
      affine_pushforward(make_builtin("quintic", {{"d", 1.3}}), mirror);
  CHECK(build_foliation(g13, 1.0).signature == "RR");
  const BoundaryFunction g4 =
      affine_pushforward(make_builtin("quintic", {{"d", 4.0}}), mirror);
  CHECK(build_foliation(g4, 1.0).signature == "RLR");
}

TEST_CASE("the compressed quintic regime carries a left trolleybus") {
  const BoundaryFunction f = make_builtin("quintic", {{"d", 1.3}});
  const Foliation fol = build_foliation(f, 1.0);
  REQUIRE(fol.figures.size() == 4);
  CHECK(std::holds_alternative<TangentDomain>(fol.figures[0]));
  CHECK(std::holds_alternative<CupFigure>(fol.figures[1]));
  REQUIRE(std::holds_alternative<TrolleybusFigure>(fol.figures[2]));
  CHECK(std::holds_alternative<TangentDomain>(fol.figures[3]));
  const auto& t = std::get<TrolleybusFigure>(fol.figures[2]);
  CHECK(t.side == Side::Left);
  CHECK(t.a0 == doctest::Approx(-2.025338754942).epsilon(1e-8));
  CHECK(t.b0 == doctest::Approx(-0.083108064094).epsilon(1e-8));
  // The plane interpolates f at both screen ends.
  CHECK(t.beta1 * t.a0 + t.beta2 * t.a0 * t.a0 + t.beta0 ==
        doctest::Approx(f.f(t.a0)).epsilon(1e-9));
  CHECK(t.beta1 * t.b0 + t.beta2 * t.b0 * t.b0 + t.beta0 ==
        doctest::Approx(f.f(t.b0)).epsilon(1e-9));
  // ∂B/∂x₂ over the trolleybus is half the mean of f″ over the screen.
  CHECK(t.beta2 ==
        doctest::Approx((f.f1(t.b0) - f.f1(t.a0)) / (2.0 * (t.b0 - t.a0)))
            .epsilon(1e-10));
}

TEST_CASE("the candidate meets the boundary data") {
  const std::vector<RosterEntry> roster = {
      {"power", {{"p", 3.0}}, 1.0, "RL"},
      {"quintic", {{"d", 1.3}}, 1.0, "LL"},
      {"two-exp", {{"alpha", 2.0}}, 0.5, "RL"}};
  for (const auto& entry : roster) {
    CAPTURE(entry.name);
    const BoundaryFunction f = make_builtin(entry.name, entry.params);
    const Foliation fol = build_foliation(f, entry.eps);
    const auto [lo, hi] = landmark_span(f, entry.eps, 5.0);
    for (int k = 0; k <= 500; ++k) {
      const double a = lo + (hi - lo) * k / 500.0;
      const double value = eval({a, a * a}, fol, f);
      CHECK(std::abs(value - f.f(a)) <= 1e-9 * (1.0 + std::abs(f.f(a))));
    }
  }
}

TEST_CASE("the candidate is continuous and C1 in x2 across figure boundaries") {
  const std::vector<RosterEntry> roster = {
      {"quintic", {{"d", 4.0}}, 1.0, "LRL"},
      {"two-exp", {{"alpha", 2.0}}, 0.5, "RL"},
      {"quartic-", {{"c", 0.3}}, 0.7, "LR"},
      {"power", {{"p", 3.0}}, 1.0, "RL"}};
  for (const auto& entry : roster) {
    CAPTURE(entry.name);
    const BoundaryFunction f = make_builtin(entry.name, entry.params);
    const Foliation fol = build_foliation(f, entry.eps);
    const auto [lo, hi] = landmark_span(f, entry.eps, 3.0);
    int boundaries = 0;
    for (int row = 1; row <= 20; ++row) {
      const double frac = row / 21.0;
      const auto at = [&](double x1) {
        return Point{x1, x1 * x1 + frac * entry.eps * entry.eps};
      };
      std::size_t prev = locate(at(lo), fol).index;
      for (int k = 1; k <= 600; ++k) {
        const double x1 = lo + (hi - lo) * k / 600.0;
        const std::size_t here = locate(at(x1), fol).index;
        if (here == prev) continue;
        // Bisect the boundary between the two figures.
        double l = lo + (hi - lo) * (k - 1) / 600.0;
        double r = x1;
        for (int it = 0; it < 60 && r - l > 1e-11; ++it) {
          const double m = 0.5 * (l + r);
          (locate(at(m), fol).index == prev ? l : r) = m;
        }
        ++boundaries;
        const double left_value = eval(at(l), fol, f);
        const double right_value = eval(at(r), fol, f);
        const double scale = 1.0 + std::abs(left_value);
        CHECK(std::abs(left_value - right_value) <= 1e-7 * scale);
        // One-sided x₂-derivatives agree across the junction.
        const double h = 1e-6;
        const auto slope_at = [&](double x1v) {
          const Point x = at(x1v);
          return (eval({x.x1, x.x2 + h}, fol, f) -
                  eval({x.x1, x.x2 - h}, fol, f)) /
                 (2.0 * h);
        };
        CHECK(std::abs(slope_at(l) - slope_at(r)) <=
              1e-5 * (1.0 + std::abs(slope_at(l))));
        prev = here;
      }
    }
    CHECK(boundaries >= 20);
  }
}

TEST_CASE("the candidate is midpoint-concave on random interior segments") {
  const BoundaryFunction f = make_builtin("quintic", {{"d", 4.0}});
  const double eps = 1.0;
  const Foliation fol = build_foliation(f, eps);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> abscissa(-5.0, 5.0);
  std::uniform_real_distribution<double> height(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double a1 = abscissa(rng);
    const double b1 = abscissa(rng);
    const Point pa{a1, a1 * a1 + height(rng) * eps * eps};
    const Point pb{b1, b1 * b1 + height(rng) * eps * eps};
    const Point mid{0.5 * (pa.x1 + pb.x1), 0.5 * (pa.x2 + pb.x2)};
    if (classify(mid, eps) == StripLocation::Outside) continue;
    ++checked;
    const double va = eval(pa, fol, f);
    const double vb = eval(pb, fol, f);
    const double vm = eval(mid, fol, f);
    const double scale = 1.0 + std::abs(va) + std::abs(vb);
    CHECK(vm >= 0.5 * (va + vb) - 1e-8 * scale);
  }
}

TEST_CASE("angle coefficients at the cube vertex and their smoothness gate") {
  const BoundaryFunction f = make_builtin("power", {{"p", 3.0}});
  const Foliation fol = build_foliation(f, 1.0);
  bool found = false;
  for (const auto& fig : fol.figures) {
    const auto* ang = std::get_if<AngleFigure>(&fig);
    if (ang == nullptr) continue;
    found = true;
    CHECK(std::abs(ang->v) <= 1e-9);
    CHECK(std::abs(ang->alpha1) <= 1e-8);
    CHECK(ang->alpha2 == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(std::abs(ang->alpha0) <= 1e-8);
  }
  CHECK(found);
  // Slopes that violate m_R + m_L = 2f′(v) are rejected.
  const double v = 0.0;
  CHECK_THROWS_AS(angle_coefficients(v, 1.0, 2.0, f, 1.0), ConstructionError);
}

TEST_CASE("trolleybus coefficients require the chord equation") {
  const BoundaryFunction f = make_builtin("quintic", {{"d", 1.3}});
  CHECK_THROWS_AS(trolleybus_coefficients(-2.0, -0.5, f), ConstructionError);
}

TEST_CASE("ownership ties at shared boundaries go to the leftmost figure") {
  const BoundaryFunction f = make_builtin("power", {{"p", 3.0}});
  const Foliation fol = build_foliation(f, 1.0);
  // (−0.3, 0.6) has u_R = 0 exactly: the right-domain edge shared with the
  // angle.  The tie resolves to the earlier figure.
  const FigureRef ref = locate({-0.3, 0.6}, fol);
  CHECK(ref.index == 0);
  CHECK(figure_label(fol.figures[ref.index]) == "R");
}

TEST_CASE("every interior point is claimed by exactly one figure sweep") {
  for (const auto& entry : signature_roster()) {
    CAPTURE(entry.name);
    const BoundaryFunction f = make_builtin(entry.name, entry.params);
    const Foliation fol = build_foliation(f, entry.eps);
    const auto [lo, hi] = landmark_span(f, entry.eps, 4.0);
    for (int i = 0; i <= 80; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double x1 = lo + (hi - lo) * i / 80.0;
        const double frac = j / 10.0;
        const Point x{x1, x1 * x1 + frac * entry.eps * entry.eps};
        CHECK_NOTHROW(locate(x, fol));
      }
    }
  }
}

TEST_CASE("points outside the strip are rejected") {
  const BoundaryFunction f = make_builtin("exp+");
  const Foliation fol = build_foliation(f, 0.5);
  CHECK_THROWS_AS(locate({0.0, -0.5}, fol), ConstructionError);
  CHECK_THROWS_AS(locate({0.0, 0.3}, fol), ConstructionError);
  CHECK_THROWS_AS(eval({1.0, 0.9}, fol, f), ConstructionError);
}

TEST_CASE("assembly refuses a family that is not completely balanced") {
  const BoundaryFunction f = make_builtin("quintic", {{"d", 4.0}});
  const double eps = 1.0;
  auto fp = std::make_shared<BoundaryFunction>(f);
  auto cup = std::make_shared<CupFamily>(grow_cup(f, -2.0, eps));
  ForceSpec F = force_from_cup(fp, cup, eps);
  F.ell = 1.0;  // sub-2ε screen with no balance point at an end
  const BalancedFamily family = audit_family({F});
  CHECK(family.status == BalanceStatus::Balanced);
  CHECK_THROWS_AS(build_foliation(family, f, eps), ConstructionError);
}

TEST_CASE("class gates reject out-of-class inputs") {
  const BoundaryFunction narrow = make_piecewise(
      PiecewisePoly({}, {{-0.01, 0.0, 1.0}}), 0.0, 0.0, 0.0, 0.5);
  CHECK_THROWS_AS(build_foliation(narrow, 0.3), ClassGateError);
  const BoundaryFunction e = make_builtin("exp+");
  CHECK_THROWS_AS(build_foliation(e, 1.5), ClassGateError);
  CHECK_THROWS_AS(build_foliation(e, -0.2), ClassGateError);
}

TEST_CASE("affine covariance carries candidate values across transforms") {
  const BoundaryFunction f = make_builtin("two-exp", {{"alpha", 2.0}});
  const AffineTransform t{-2.0, 0.7, 1.5, 0.4, -0.3, 2.1};
  const BoundaryFunction g = affine_pushforward(f, t);
  const double eps_g = 0.25;
  const double eps_f = std::abs(t.a) * eps_g;
  const Foliation fol_f = build_foliation(f, eps_f);
  const Foliation fol_g = build_foliation(g, eps_g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> abscissa(-1.5, 1.5);
  std::uniform_real_distribution<double> height(0.05, 0.95);
  for (int k = 0; k < 50; ++k) {
    const double y1 = abscissa(rng);
    const double y2 = y1 * y1 + height(rng) * eps_g * eps_g;
    const double got = eval({y1, y2}, fol_g, g);
    // A test function for g at (y₁, y₂) is a·φ + b for a test function φ of
    // f at the pushed-forward moments, so the candidates must agree.
    const double x1 = t.a * y1 + t.b;
    const double x2 = t.a * t.a * y2 + 2.0 * t.a * t.b * y1 + t.b * t.b;
    const double want =
        t.c * eval({x1, x2}, fol_f, f) + t.d * y2 + t.alpha * y1 + t.beta;
    CHECK(std::abs(got - want) <= 1e-8 * (1.0 + std::abs(want)));
  }
}

}  // TEST_SUITE("candidate")
