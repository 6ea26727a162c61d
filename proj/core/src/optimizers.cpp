// SPDX-License-Identifier: MIT
#include "bellman/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bellman/errors.hpp"
#include "bellman/numerics.hpp"
#include "bellman/tangents.hpp"

namespace bellman {

namespace {

constexpr double kWidthFloor = 1e-300;  // drop pieces of smaller measure

// ==== piece primitives ====

double eval_piece(const ConstantPiece& p, double /*s*/) { return p.value; }

double eval_piece(const LogRampUpPiece& p, double s) {
  if (s <= p.pole) return -std::numeric_limits<double>::infinity();
  return p.value + p.eps * std::log((s - p.pole) / (p.anchor - p.pole));
}

double eval_piece(const LogRampDownPiece& p, double s) {
  if (s >= p.pole) return std::numeric_limits<double>::infinity();
  return p.value - p.eps * std::log((p.pole - s) / (p.pole - p.anchor));
}

/// ∫_{piece.lo}^{s} φ dt, exact.  The log antiderivatives
/// ∫log = (s−p)(log−1) and ∫log² = (s−p)(log²−2log+2) vanish at the pole.
double prefix_m1(const ConstantPiece& p, double s) {
  return p.value * (s - p.lo);
}

double log_terms_up(const LogRampUpPiece& p, double s, double* int_log,
                    double* int_log2) {
  const double d = s - p.pole;
  if (d <= 0.0) {
    *int_log = 0.0;
    *int_log2 = 0.0;
    return 0.0;
  }
  const double L = std::log(d / (p.anchor - p.pole));
  *int_log = d * (L - 1.0);
  *int_log2 = d * (L * L - 2.0 * L + 2.0);
  return L;
}

double log_terms_down(const LogRampDownPiece& p, double s, double* int_log,
                      double* int_log2) {
  const double d = p.pole - s;
  if (d <= 0.0) {
    *int_log = 0.0;
    *int_log2 = 0.0;
    return 0.0;
  }
  const double L = std::log(d / (p.pole - p.anchor));
  *int_log = -d * (L - 1.0);
  *int_log2 = -d * (L * L - 2.0 * L + 2.0);
  return L;
}

/// ∫_a^b φ and ∫_a^b φ² over one piece, lo ≤ a ≤ b ≤ hi.  The width (b − a)
/// enters each term directly, so short spans keep full relative accuracy
/// where differences of prefix values would cancel.
double span_m1(const ConstantPiece& p, double a, double b) {
  return p.value * (b - a);
}

double span_m1(const LogRampUpPiece& p, double a, double b) {
  double il_a = 0.0, il2_a = 0.0, il_b = 0.0, il2_b = 0.0;
  log_terms_up(p, a, &il_a, &il2_a);
  log_terms_up(p, b, &il_b, &il2_b);
  return p.value * (b - a) + p.eps * (il_b - il_a);
}

double span_m1(const LogRampDownPiece& p, double a, double b) {
  double il_a = 0.0, il2_a = 0.0, il_b = 0.0, il2_b = 0.0;
  log_terms_down(p, a, &il_a, &il2_a);
  log_terms_down(p, b, &il_b, &il2_b);
  return p.value * (b - a) - p.eps * (il_b - il_a);
}

double span_m2(const ConstantPiece& p, double a, double b) {
  return p.value * p.value * (b - a);
}

double span_m2(const LogRampUpPiece& p, double a, double b) {
  double il_a = 0.0, il2_a = 0.0, il_b = 0.0, il2_b = 0.0;
  log_terms_up(p, a, &il_a, &il2_a);
  log_terms_up(p, b, &il_b, &il2_b);
  return p.value * p.value * (b - a) +
         2.0 * p.value * p.eps * (il_b - il_a) +
         p.eps * p.eps * (il2_b - il2_a);
}

double span_m2(const LogRampDownPiece& p, double a, double b) {
  double il_a = 0.0, il2_a = 0.0, il_b = 0.0, il2_b = 0.0;
  log_terms_down(p, a, &il_a, &il2_a);
  log_terms_down(p, b, &il_b, &il2_b);
  return p.value * p.value * (b - a) -
         2.0 * p.value * p.eps * (il_b - il_a) +
         p.eps * p.eps * (il2_b - il2_a);
}

double prefix_m1(const LogRampUpPiece& p, double s) {
  return span_m1(p, p.lo, s);
}

double prefix_m1(const LogRampDownPiece& p, double s) {
  return span_m1(p, p.lo, s);
}

double prefix_m2(const ConstantPiece& p, double s) {
  return span_m2(p, p.lo, s);
}

double prefix_m2(const LogRampUpPiece& p, double s) {
  return span_m2(p, p.lo, s);
}

double prefix_m2(const LogRampDownPiece& p, double s) {
  return span_m2(p, p.lo, s);
}

double prefix_m1_any(const Piece& piece, double s) {
  return std::visit([s](const auto& p) { return prefix_m1(p, s); }, piece);
}

double prefix_m2_any(const Piece& piece, double s) {
  return std::visit([s](const auto& p) { return prefix_m2(p, s); }, piece);
}

double span_m1_any(const Piece& piece, double a, double b) {
  return std::visit([a, b](const auto& p) { return span_m1(p, a, b); }, piece);
}

double span_m2_any(const Piece& piece, double a, double b) {
  return std::visit([a, b](const auto& p) { return span_m2(p, a, b); }, piece);
}

/// ∫_{lo}^{hi} f(φ(s)) ds for one piece.  For ramps substitute t = φ(s):
/// ds = ±(T/ε)·e^{±(t−value)/ε} dt, an exponentially weighted integral of f
/// that stays finite through an infinite ramp end.
double piece_mf(const ConstantPiece& p, const BoundaryFunction& f) {
  return f.f(p.value) * (p.hi - p.lo);
}

double piece_mf(const LogRampUpPiece& p, const BoundaryFunction& f) {
  const double T = p.anchor - p.pole;
  const double theta_hi = eval_piece(p, p.hi) - p.value;
  const double theta_lo = (p.lo <= p.pole) ? kNegInf
                                           : eval_piece(p, p.lo) - p.value;
  const double v = p.value;
  const auto g = [&f, v](double theta) { return f.f(theta + v); };
  QuadratureSettings s = f.quadrature();
  for (double& t : s.split_points) t -= v;
  return (T / p.eps) *
         weighted_integral(g, theta_lo, theta_hi, +1.0, p.eps, s);
}

double piece_mf(const LogRampDownPiece& p, const BoundaryFunction& f) {
  const double T = p.pole - p.anchor;
  const double theta_lo = eval_piece(p, p.lo) - p.value;
  const double theta_hi = (p.hi >= p.pole) ? kPosInf
                                           : eval_piece(p, p.hi) - p.value;
  const double v = p.value;
  const auto g = [&f, v](double theta) { return f.f(theta + v); };
  QuadratureSettings s = f.quadrature();
  for (double& t : s.split_points) t -= v;
  return (T / p.eps) *
         weighted_integral(g, theta_lo, theta_hi, -1.0, p.eps, s);
}

// ==== recipe assembly helpers ====

/// Affinely maps pieces covering [0,1] onto [lo, hi] (measure scales by
/// hi − lo; φ values are unchanged because the log ratio is scale-free).
void append_compressed(std::vector<Piece>* out, const std::vector<Piece>& src,
                       double lo, double hi) {
  const double k = hi - lo;
  if (k <= kWidthFloor) return;
  const auto map = [lo, k](double s) { return lo + k * s; };
  for (const Piece& piece : src) {
    Piece mapped = std::visit(
        [&map](auto p) -> Piece {
          p.lo = map(p.lo);
          p.hi = map(p.hi);
          if constexpr (!std::is_same_v<std::decay_t<decltype(p)>,
                                        ConstantPiece>) {
            p.pole = map(p.pole);
            p.anchor = map(p.anchor);
          }
          return p;
        },
        piece);
    if (piece_hi(mapped) - piece_lo(mapped) > kWidthFloor) {
      out->push_back(mapped);
    }
  }
}

void append_constant(std::vector<Piece>* out, double lo, double hi,
                     double value) {
  if (hi - lo > kWidthFloor) out->push_back(ConstantPiece{lo, hi, value});
}

/// Delivery curve builder.  The entry curve of a tangent domain at parameter
/// u realizes the upper-parabola point of the tangent segment at u; interior
/// points mix it with the constant foot value.  Screen-anchored domains chain
/// through the structure behind them (two-value cup step or trolleybus
/// transit), which recurses further toward the strip ends.
class RecipeBuilder {
 public:
  RecipeBuilder(const Foliation& fol, const BoundaryFunction& f)
      : fol_(fol), f_(f) {}

  std::vector<Piece> at_figure(std::size_t index, Point x) const {
    const Figure& fig = fol_.figures.at(index);
    if (const auto* dom = std::get_if<TangentDomain>(&fig)) {
      return tangent_point(index, *dom, x);
    }
    if (const auto* cup = std::get_if<CupFigure>(&fig)) {
      return cup_point(*cup, x);
    }
    if (const auto* ang = std::get_if<AngleFigure>(&fig)) {
      return angle_point(index, *ang, x);
    }
    return trolleybus_point(index, std::get<TrolleybusFigure>(fig), x);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConstructionError("optimizer recipe: " + what);
  }

  static double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

  Point upper_point(double x1) const {
    return Point{x1, x1 * x1 + fol_.eps * fol_.eps};
  }

  /// Full history of a right domain at parameter u: pieces on [0,1] whose
  /// moments equal the upper point (u−ε, (u−ε)²+ε²), ending at value u.
  std::vector<Piece> history_right(std::size_t index, double u) const {
    const auto& dom = std::get<TangentDomain>(fol_.figures.at(index));
    const double eps = fol_.eps;
    std::vector<Piece> out;
    if (dom.coeff.anchor().kind == AnchorKind::FromInfinity) {
      out.push_back(LogRampUpPiece{0.0, 1.0, 0.0, 1.0, u, eps});
      return out;
    }
    if (dom.coeff.anchor().kind != AnchorKind::ScreenEnd) {
      fail("right domain has no deliverable entry anchor");
    }
    const double b0 = dom.coeff.anchor().b0;
    const double tau = std::exp(-(std::max(u, b0) - b0) / eps);
    append_compressed(&out, entry_right(index), 0.0, tau);
    if (1.0 - tau > kWidthFloor) {
      out.push_back(LogRampUpPiece{tau, 1.0, 0.0, 1.0, u, eps});
    }
    return out;
  }

  /// Mirror: history of a left domain at u, starting at value u, delivering
  /// the upper point (u+ε, (u+ε)²+ε²).
  std::vector<Piece> history_left(std::size_t index, double u) const {
    const auto& dom = std::get<TangentDomain>(fol_.figures.at(index));
    const double eps = fol_.eps;
    std::vector<Piece> out;
    if (dom.coeff.anchor().kind == AnchorKind::FromInfinity) {
      out.push_back(LogRampDownPiece{0.0, 1.0, 1.0, 0.0, u, eps});
      return out;
    }
    if (dom.coeff.anchor().kind != AnchorKind::ScreenEnd) {
      fail("left domain has no deliverable entry anchor");
    }
    const double a0 = dom.coeff.anchor().a0;
    const double tau = std::exp(-(a0 - std::min(u, a0)) / eps);
    if (1.0 - tau > kWidthFloor) {
      out.push_back(LogRampDownPiece{0.0, 1.0 - tau, 1.0, 0.0, u, eps});
    }
    append_compressed(&out, entry_left(index), 1.0 - tau, 1.0);
    return out;
  }

  /// Entry curve behind a screen-anchored right domain: the figure on its
  /// left is either the full cup (two-value step delivering the chord
  /// midpoint) or a right trolleybus (transit recipe at the corner B₁).
  std::vector<Piece> entry_right(std::size_t index) const {
    if (index == 0) fail("screen-anchored right domain at the strip start");
    const Figure& prev = fol_.figures.at(index - 1);
    const auto& dom = std::get<TangentDomain>(fol_.figures.at(index));
    const double a0 = dom.coeff.anchor().a0;
    const double b0 = dom.coeff.anchor().b0;
    if (std::holds_alternative<CupFigure>(prev)) {
      return step_pieces(a0, b0, 0.5);
    }
    if (const auto* tr = std::get_if<TrolleybusFigure>(&prev)) {
      if (tr->side != Side::Right) fail("left trolleybus feeding right domain");
      return at_figure(index - 1, upper_point(tr->b0 - fol_.eps));
    }
    fail("right domain not preceded by a structure");
  }

  std::vector<Piece> entry_left(std::size_t index) const {
    const auto& dom = std::get<TangentDomain>(fol_.figures.at(index));
    const double a0 = dom.coeff.anchor().a0;
    const double b0 = dom.coeff.anchor().b0;
    if (index + 1 >= fol_.figures.size()) {
      fail("screen-anchored left domain at the strip end");
    }
    const Figure& next = fol_.figures.at(index + 1);
    if (!std::holds_alternative<CupFigure>(next)) {
      fail("left domain not followed by a structure");
    }
    if (index + 2 < fol_.figures.size()) {
      if (const auto* tr =
              std::get_if<TrolleybusFigure>(&fol_.figures[index + 2])) {
        if (tr->side == Side::Left) {
          return at_figure(index + 2, upper_point(tr->a0 + fol_.eps));
        }
      }
    }
    return step_pieces(a0, b0, 0.5);
  }

  static std::vector<Piece> step_pieces(double a, double b, double alpha) {
    std::vector<Piece> out;
    append_constant(&out, 0.0, alpha, a);
    append_constant(&out, alpha, 1.0, b);
    return out;
  }

  std::vector<Piece> tangent_point(std::size_t index, const TangentDomain& dom,
                                   Point x) const {
    const double eps = fol_.eps;
    std::vector<Piece> out;
    if (dom.side == Side::Right) {
      double u = u_tangent(x, Side::Right, eps);
      if (is_finite(dom.u_lo)) u = std::max(u, dom.u_lo);
      if (is_finite(dom.u_hi)) u = std::min(u, dom.u_hi);
      const double alpha = clamp01((u - x.x1) / eps);
      append_compressed(&out, history_right(index, u), 0.0, alpha);
      append_constant(&out, alpha, 1.0, u);
    } else {
      double u = u_tangent(x, Side::Left, eps);
      if (is_finite(dom.u_lo)) u = std::max(u, dom.u_lo);
      if (is_finite(dom.u_hi)) u = std::min(u, dom.u_hi);
      const double alpha = clamp01((x.x1 - u) / eps);
      append_constant(&out, 0.0, 1.0 - alpha, u);
      append_compressed(&out, history_left(index, u), 1.0 - alpha, 1.0);
    }
    return out;
  }

  std::vector<Piece> cup_point(const CupFigure& fig, Point x) const {
    const auto ell = locate_chord(*fig.cup, x);
    if (!ell) fail("cup point is off every chord");
    const double a = fig.cup->a_of_ell(*ell);
    const double b = a + *ell;
    if (b - a <= 1e-14 * (1.0 + std::abs(a))) {
      return {ConstantPiece{0.0, 1.0, x.x1}};
    }
    const double alpha = clamp01((b - x.x1) / (b - a));
    return step_pieces(a, b, alpha);
  }

  /// The segment of slope 2x₁ through an angle-figure point meets the right
  /// tangent at P⁻ and the left tangent at P⁺; the recipe is the barycentric
  /// concatenation of the side recipes at those points.
  std::vector<Piece> angle_point(std::size_t index, const AngleFigure& ang,
                                 Point x) const {
    const double eps = fol_.eps;
    const double v = ang.v;
    const double num_minus =
        2.0 * x.x1 * x.x1 - x.x2 - (v - eps) * (v - eps) + eps * eps;
    const double num_plus =
        2.0 * x.x1 * x.x1 - x.x2 - (v + eps) * (v + eps) + eps * eps;
    const double t_minus = num_minus / (2.0 * (x.x1 - v + eps));
    const double t_plus = num_plus / (2.0 * (x.x1 - v - eps));
    const auto on_line = [&x](double t) {
      return Point{t, 2.0 * x.x1 * (t - x.x1) + x.x2};
    };
    if (!(t_minus <= x.x1 + 1e-12 && x.x1 <= t_plus + 1e-12)) {
      fail("angle chord does not straddle the point");
    }
    if (index == 0 || index + 1 >= fol_.figures.size()) {
      fail("angle without flanking tangent domains");
    }
    const auto* left_dom =
        std::get_if<TangentDomain>(&fol_.figures[index - 1]);
    const auto* right_dom =
        std::get_if<TangentDomain>(&fol_.figures[index + 1]);
    if (left_dom == nullptr || right_dom == nullptr ||
        left_dom->side != Side::Right || right_dom->side != Side::Left) {
      fail("angle flanks are not tangent domains");
    }
    const double span = t_plus - t_minus;
    std::vector<Piece> out;
    if (span <= kWidthFloor) {
      // Point sits at the apex limit; both sides collapse onto u = v.
      append_constant(&out, 0.0, 1.0, v);
      return out;
    }
    const double alpha = clamp01((t_plus - x.x1) / span);
    append_compressed(&out, tangent_point(index - 1, *left_dom, on_line(t_minus)),
                      0.0, alpha);
    append_compressed(&out, tangent_point(index + 1, *right_dom, on_line(t_plus)),
                      alpha, 1.0);
    return out;
  }

  /// Right trolleybus: draw the line from B₀=(b₀,b₀²) through x to the point
  /// P on the right tangent segment at a₀ (corners A₁=(a₀−ε,·) upper and
  /// A₀=(a₀,a₀²) lower): x = ν·P + (1−ν)·B₀, P = μ·A₁ + (1−μ)·A₀.  The
  /// pieces mix the left history at a₀ (measure νμ) with constants a₀, b₀.
  std::vector<Piece> trolleybus_point(std::size_t index,
                                      const TrolleybusFigure& fig,
                                      Point x) const {
    const double eps = fol_.eps;
    const double a0 = fig.a0;
    const double b0 = fig.b0;
    if (fig.side == Side::Right) {
      const double slope = 2.0 * (a0 - eps);
      const double intercept = -(a0 - eps) * (a0 - eps) + eps * eps;
      // Intersection parameter along B₀ + t·(x − B₀) with the tangent line.
      const double denom = (x.x2 - b0 * b0) - slope * (x.x1 - b0);
      const double rhs = slope * b0 + intercept - b0 * b0;
      if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(rhs))) {
        fail("trolleybus sight line parallel to the far tangent");
      }
      const double t_star = rhs / denom;
      const double px1 = b0 + t_star * (x.x1 - b0);
      const double mu = (a0 - px1) / eps;
      const double nu = (b0 - x.x1) / (b0 - px1);
      if (mu < -1e-9 || mu > 1.0 + 1e-9 || nu < -1e-9 || nu > 1.0 + 1e-9) {
        fail("trolleybus barycentric weights out of range");
      }
      const double m = clamp01(mu);
      const double n = clamp01(nu);
      if (index < 2) fail("right trolleybus without a left domain");
      const auto* left_dom =
          std::get_if<TangentDomain>(&fol_.figures[index - 2]);
      if (left_dom == nullptr || left_dom->side != Side::Right) {
        fail("right trolleybus not fed by a right domain");
      }
      std::vector<Piece> out;
      append_compressed(&out, history_right(index - 2, a0), 0.0, n * m);
      append_constant(&out, n * m, n, a0);
      append_constant(&out, n, 1.0, b0);
      return out;
    }
    // Left trolleybus: mirror through the line from A₀=(a₀,a₀²) to P′ on the
    // left tangent segment at b₀ (corners B₀ lower, B₁′=(b₀+ε,·) upper).
    const double slope = 2.0 * (b0 + eps);
    const double intercept = -(b0 + eps) * (b0 + eps) + eps * eps;
    const double denom = (x.x2 - a0 * a0) - slope * (x.x1 - a0);
    const double rhs = slope * a0 + intercept - a0 * a0;
    if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(rhs))) {
      fail("trolleybus sight line parallel to the far tangent");
    }
    const double t_star = rhs / denom;
    const double px1 = a0 + t_star * (x.x1 - a0);
    const double mu = (px1 - b0) / eps;
    const double nu = (x.x1 - a0) / (px1 - a0);
    if (mu < -1e-9 || mu > 1.0 + 1e-9 || nu < -1e-9 || nu > 1.0 + 1e-9) {
      fail("trolleybus barycentric weights out of range");
    }
    const double m = clamp01(mu);
    const double n = clamp01(nu);
    if (index + 1 >= fol_.figures.size()) {
      fail("left trolleybus without a right domain");
    }
    const auto* right_dom =
        std::get_if<TangentDomain>(&fol_.figures[index + 1]);
    if (right_dom == nullptr || right_dom->side != Side::Left) {
      fail("left trolleybus not fed by a left domain");
    }
    std::vector<Piece> out;
    append_constant(&out, 0.0, 1.0 - n, a0);
    append_constant(&out, 1.0 - n, 1.0 - n * m, b0);
    append_compressed(&out, history_left(index + 1, b0), 1.0 - n * m, 1.0);
    return out;
  }

  const Foliation& fol_;
  const BoundaryFunction& f_;
};

void merge_constants(std::vector<Piece>* pieces) {
  std::vector<Piece> out;
  for (const Piece& piece : *pieces) {
    if (!out.empty()) {
      auto* prev = std::get_if<ConstantPiece>(&out.back());
      const auto* cur = std::get_if<ConstantPiece>(&piece);
      if (prev != nullptr && cur != nullptr && prev->value == cur->value &&
          std::abs(prev->hi - cur->lo) <= 1e-15) {
        prev->hi = cur->hi;
        continue;
      }
    }
    out.push_back(piece);
  }
  *pieces = std::move(out);
}

}  // namespace

// ==== public surface ====

double piece_lo(const Piece& p) {
  return std::visit([](const auto& q) { return q.lo; }, p);
}

double piece_hi(const Piece& p) {
  return std::visit([](const auto& q) { return q.hi; }, p);
}

double phi_value(const TestFunction& phi, double s) {
  if (phi.pieces.empty()) throw ConfigError("empty test function");
  for (const Piece& piece : phi.pieces) {
    if (s <= piece_hi(piece)) {
      return std::visit([s](const auto& q) { return eval_piece(q, s); },
                        piece);
    }
  }
  return std::visit(
      [s](const auto& q) { return eval_piece(q, s); }, phi.pieces.back());
}

TestFunction build_optimizer(Point x, const Foliation& fol,
                             const BoundaryFunction& f) {
  const StripLocation loc = classify(x, fol.eps);
  if (loc == StripLocation::Outside) {
    throw ConstructionError("optimizer point lies outside the strip");
  }
  TestFunction phi;
  if (loc == StripLocation::LowerBoundary) {
    phi.pieces.push_back(ConstantPiece{0.0, 1.0, x.x1});
    return phi;
  }
  const FigureRef ref = locate(x, fol);
  RecipeBuilder builder(fol, f);
  phi.pieces = builder.at_figure(ref.index, x);
  merge_constants(&phi.pieces);
  if (phi.pieces.empty()) {
    throw ConstructionError("optimizer recipe produced no pieces");
  }
  return phi;
}

MomentTriple moments(const TestFunction& phi, const BoundaryFunction& f) {
  MomentTriple out;
  for (const Piece& piece : phi.pieces) {
    out.m1 += prefix_m1_any(piece, piece_hi(piece));
    out.m2 += prefix_m2_any(piece, piece_hi(piece));
    out.mf += std::visit([&f](const auto& p) { return piece_mf(p, f); }, piece);
  }
  return out;
}

double bmo_norm(const TestFunction& phi, int resolution) {
  if (phi.pieces.empty()) throw ConfigError("empty test function");
  const int res = std::max(2, resolution);
  std::vector<double> nodes;
  nodes.reserve(phi.pieces.size() * (res + 2));
  for (const Piece& piece : phi.pieces) {
    const double lo = piece_lo(piece);
    const double hi = piece_hi(piece);
    nodes.push_back(lo);
    nodes.push_back(hi);
    if (hi - lo <= kWidthFloor) continue;
    if (const auto* up = std::get_if<LogRampUpPiece>(&piece)) {
      const double d_lo = lo - up->pole;
      const double d_hi = hi - up->pole;
      for (int k = 1; k < res; ++k) {
        const double t = static_cast<double>(k) / res;
        const double d = (d_lo > 1e-13 * d_hi)
                             ? d_lo * std::pow(d_hi / d_lo, t)
                             : d_hi * std::pow(1e-13, 1.0 - t);
        nodes.push_back(up->pole + d);
      }
    } else if (const auto* down = std::get_if<LogRampDownPiece>(&piece)) {
      const double d_lo = down->pole - hi;
      const double d_hi = down->pole - lo;
      for (int k = 1; k < res; ++k) {
        const double t = static_cast<double>(k) / res;
        const double d = (d_lo > 1e-13 * d_hi)
                             ? d_lo * std::pow(d_hi / d_lo, t)
                             : d_hi * std::pow(1e-13, 1.0 - t);
        nodes.push_back(down->pole - d);
      }
    } else {
      for (int k = 1; k < res; ++k) {
        nodes.push_back(lo + (hi - lo) * static_cast<double>(k) / res);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // Exact ∫φ and ∫φ² over each span between adjacent nodes, piece-local.
  // (A single global cumulative would lose the tiny near-pole masses to
  // cancellation against the O(1) total, inflating the variance of short
  // windows there.)
  const std::size_t n = nodes.size();
  if (n < 2) return 0.0;
  std::vector<double> span1(n - 1, 0.0), span2(n - 1, 0.0);
  {
    std::size_t p = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      while (p + 1 < phi.pieces.size() &&
             piece_hi(phi.pieces[p]) <= nodes[k]) {
        ++p;
      }
      const Piece& piece = phi.pieces[p];
      const double a = std::max(piece_lo(piece), nodes[k]);
      const double b = std::min(piece_hi(piece), nodes[k + 1]);
      if (b > a) {
        span1[k] = span_m1_any(piece, a, b);
        span2[k] = span_m2_any(piece, a, b);
      }
    }
  }

  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      s1 += span1[j - 1];
      s2 += span2[j - 1];
      const double len = nodes[j] - nodes[i];
      if (len <= 1e-15) continue;
      const double mean = s1 / len;
      const double var = s2 / len - mean * mean;
      if (var > sup) sup = var;
    }
  }
  return std::sqrt(std::max(0.0, sup));
}

TestFunction truncate(const TestFunction& phi, double c, double d) {
  if (!(c < d)) throw ConfigError("truncation needs c < d");
  TestFunction out;
  for (const Piece& piece : phi.pieces) {
    const double lo = piece_lo(piece);
    const double hi = piece_hi(piece);
    if (hi - lo <= kWidthFloor) continue;
    if (const auto* cp = std::get_if<ConstantPiece>(&piece)) {
      out.pieces.push_back(
          ConstantPiece{lo, hi, std::min(d, std::max(c, cp->value))});
      continue;
    }
    if (const auto* up = std::get_if<LogRampUpPiece>(&piece)) {
      const double v_lo = eval_piece(*up, lo);
      const double v_hi = eval_piece(*up, hi);
      if (v_hi <= c) {
        out.pieces.push_back(ConstantPiece{lo, hi, c});
        continue;
      }
      if (v_lo >= d) {
        out.pieces.push_back(ConstantPiece{lo, hi, d});
        continue;
      }
      const double T = up->anchor - up->pole;
      double mid_lo = lo;
      double mid_hi = hi;
      if (v_lo < c) {
        const double sc = std::min(
            hi, std::max(lo, up->pole + T * std::exp((c - up->value) / up->eps)));
        append_constant(&out.pieces, lo, sc, c);
        mid_lo = sc;
      }
      if (v_hi > d) {
        const double sd = std::min(
            hi, std::max(lo, up->pole + T * std::exp((d - up->value) / up->eps)));
        mid_hi = sd;
      }
      if (mid_hi - mid_lo > kWidthFloor) {
        LogRampUpPiece middle = *up;
        middle.lo = mid_lo;
        middle.hi = mid_hi;
        out.pieces.push_back(middle);
      }
      if (v_hi > d) append_constant(&out.pieces, mid_hi, hi, d);
      continue;
    }
    const auto& down = std::get<LogRampDownPiece>(piece);
    const double v_lo = eval_piece(down, lo);
    const double v_hi = eval_piece(down, hi);
    if (v_hi <= c) {
      out.pieces.push_back(ConstantPiece{lo, hi, c});
      continue;
    }
    if (v_lo >= d) {
      out.pieces.push_back(ConstantPiece{lo, hi, d});
      continue;
    }
    const double T = down.pole - down.anchor;
    double mid_lo = lo;
    double mid_hi = hi;
    if (v_lo < c) {
      const double sc = std::min(
          hi,
          std::max(lo, down.pole - T * std::exp((down.value - c) / down.eps)));
      append_constant(&out.pieces, lo, sc, c);
      mid_lo = sc;
    }
    if (v_hi > d) {
      const double sd = std::min(
          hi,
          std::max(lo, down.pole - T * std::exp((down.value - d) / down.eps)));
      mid_hi = sd;
    }
    if (mid_hi - mid_lo > kWidthFloor) {
      LogRampDownPiece middle = down;
      middle.lo = mid_lo;
      middle.hi = mid_hi;
      out.pieces.push_back(middle);
    }
    if (v_hi > d) append_constant(&out.pieces, mid_hi, hi, d);
  }
  merge_constants(&out.pieces);
  if (out.pieces.empty()) {
    out.pieces.push_back(ConstantPiece{0.0, 1.0, c});
  }
  return out;
}

}  // namespace bellman
