// SPDX-License-Identifier: MIT
#include "bellman/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellman/errors.hpp"
#include "bellman/numerics.hpp"

namespace bellman {

namespace {

double membership_tol(Point x, double eps) {
  return 1e-9 * (1.0 + std::abs(x.x1) + eps);
}

double edge_tolerance(double v) { return 1e-9 * (1.0 + std::abs(v)); }

/// Letter and anchored coefficient data a structure presents to the gap on
/// one of its sides.
struct Flank {
  Side side = Side::Right;
  Anchor anchor;
};

std::string format_range(ExtendedReal lo, ExtendedReal hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

/// Assembler that walks the balanced family left to right.
class Builder {
 public:
  Builder(const BalancedFamily& family, const BoundaryFunction& f, double eps)
      : family_(family), f_(f), eps_(eps) {
    // A finite midpoint for prime windows when a domain has no finite end.
    double center = 0.0;
    int found = 0;
    for (ExtendedReal c : f.pattern.c_points) {
      if (is_finite(c)) {
        center += c;
        ++found;
      }
    }
    for (double v : f.pattern.v_points) {
      center += v;
      ++found;
    }
    center_ = found > 0 ? center / found : 0.0;
  }

  Foliation run() {
    classify_structures();
    const std::size_t n = family_.forces.size();
    for (std::size_t j = 0; j < n; ++j) {
      const ForceSpec& F = family_.forces[j];
      if (j == 0 && !F.is_infinite()) {
        const Flank entry = entry_flank(0);
        if (entry.side != Side::Left) {
          throw ConstructionError(
              "build_foliation: leftmost screen cannot open with a Right "
              "domain");
        }
        emit_domain(Side::Left, kNegInf, F.screen_a(), entry.anchor);
      }
      if (j > 0) emit_gap(j - 1, j);
      if (!F.is_infinite()) emit_structure(j);
      if (j + 1 == n && !F.is_infinite()) {
        const Flank exit = exit_flank(j);
        if (exit.side != Side::Right) {
          throw ConstructionError(
              "build_foliation: rightmost screen cannot close with a Left "
              "domain");
        }
        emit_domain(Side::Right, F.screen_b(), kPosInf, exit.anchor);
      }
    }
    if (n == 1 && family_.forces[0].is_infinite()) {
      const ForceSpec& F = family_.forces[0];
      if (F.source_c == kNegInf) {
        emit_domain(Side::Right, kNegInf, kPosInf, Anchor::from_infinity());
      } else {
        emit_domain(Side::Left, kNegInf, kPosInf, Anchor::from_infinity());
      }
    }
    Foliation fol;
    fol.figures = std::move(figures_);
    fol.signature = std::move(signature_);
    fol.eps = eps_;
    return fol;
  }

 private:
  struct StructureClass {
    bool right_tr = false;  ///< balance point at the left screen end
    bool left_tr = false;   ///< balance point at the right screen end
  };

  void classify_structures() {
    const std::size_t n = family_.forces.size();
    cls_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const ForceSpec& F = family_.forces[j];
      if (F.is_infinite()) continue;
      const double a = F.screen_a();
      const double b = F.screen_b();
      if (j > 0) {
        const double v = family_.balance_points[j - 1];
        if (std::abs(v - a) <= edge_tolerance(v)) cls_[j].right_tr = true;
      }
      if (j + 1 < n) {
        const double v = family_.balance_points[j];
        if (std::abs(v - b) <= edge_tolerance(v)) cls_[j].left_tr = true;
      }
      if (cls_[j].right_tr && cls_[j].left_tr) {
        throw ConstructionError(
            "build_foliation: screen at " + format_range(a, b) +
            " is compressed on both ends (degenerate layout outside the "
            "constructive range)");
      }
      const bool full = F.ell >= 2.0 * eps_ * (1.0 - 1e-9);
      if (!full && !cls_[j].right_tr && !cls_[j].left_tr) {
        throw ConstructionError(
            "build_foliation: compressed screen at " + format_range(a, b) +
            " has no balance point at either end");
      }
    }
  }

  Flank entry_flank(std::size_t j) const {
    const ForceSpec& F = family_.forces[j];
    if (F.is_infinite()) return {Side::Left, Anchor::from_infinity()};
    const Anchor sc = Anchor::screen_end(F.screen_a(), F.screen_b());
    if (cls_[j].right_tr) return {Side::Right, sc};
    return {Side::Left, sc};
  }

  Flank exit_flank(std::size_t j) const {
    const ForceSpec& F = family_.forces[j];
    if (F.is_infinite()) return {Side::Right, Anchor::from_infinity()};
    const Anchor sc = Anchor::screen_end(F.screen_a(), F.screen_b());
    if (cls_[j].left_tr) return {Side::Left, sc};
    return {Side::Right, sc};
  }

  void emit_gap(std::size_t jl, std::size_t jr) {
    const ForceSpec& L = family_.forces[jl];
    const ForceSpec& R = family_.forces[jr];
    const Flank exit = exit_flank(jl);
    const Flank entry = entry_flank(jr);
    const ExtendedReal lo = L.is_infinite() ? kNegInf : L.screen_b();
    const ExtendedReal hi = R.is_infinite() ? kPosInf : R.screen_a();
    const double v = family_.balance_points[jl];

    if (exit.side == Side::Right && entry.side == Side::Left) {
      emit_domain(Side::Right, lo, v, exit.anchor);
      emit_angle(v, exit.anchor, entry.anchor);
      emit_domain(Side::Left, v, hi, entry.anchor);
      return;
    }
    if (exit.side == Side::Right && entry.side == Side::Right) {
      emit_domain(Side::Right, lo, hi, exit.anchor);
      return;
    }
    if (exit.side == Side::Left && entry.side == Side::Left) {
      emit_domain(Side::Left, lo, hi, entry.anchor);
      return;
    }
    throw ConstructionError(
        "build_foliation: adjacent Left exit and Right entry leave the gap " +
        format_range(lo, hi) + " uncovered");
  }

  void emit_domain(Side side, ExtendedReal lo, ExtendedReal hi,
                   const Anchor& anchor) {
    if (is_finite(lo) && is_finite(hi)) {
      if (hi - lo <= 1e-10 * (1.0 + std::abs(lo) + std::abs(hi))) return;
    }
    // Prime window: clip infinite ends 12ε past the nearest finite landmark.
    double w_lo;
    double w_hi;
    const double pad = 12.0 * eps_;
    if (is_finite(lo) && is_finite(hi)) {
      w_lo = lo;
      w_hi = hi;
    } else if (is_finite(lo)) {
      w_lo = lo;
      w_hi = lo + pad;
    } else if (is_finite(hi)) {
      w_lo = hi - pad;
      w_hi = hi;
    } else {
      w_lo = center_ - pad;
      w_hi = center_ + pad;
    }
    TangentCoefficient coeff(side, anchor, f_, eps_);
    coeff.prime(w_lo, w_hi);
    certify_sign(coeff, side, w_lo, w_hi);
    figures_.push_back(TangentDomain{side, lo, hi, std::move(coeff)});
    signature_ += side == Side::Right ? 'R' : 'L';
  }

  /// The one-sided concavity certificate: m″ ≤ 0 on Right domains,
  /// m″ ≥ 0 on Left domains (these are exactly the tail signs of the
  /// generating forces).
  void certify_sign(const TangentCoefficient& coeff, Side side, double w_lo,
                    double w_hi) const {
    const int samples = 33;
    for (int k = 0; k < samples; ++k) {
      const double u =
          w_lo + (w_hi - w_lo) * static_cast<double>(k) / (samples - 1);
      const double m2 = coeff.m_second(u);
      const double slack = 1e-8 * (1.0 + std::abs(f_.f2(u))) / eps_;
      const bool ok =
          side == Side::Right ? m2 <= slack : m2 >= -slack;
      if (!ok) {
        std::ostringstream os;
        os << "build_foliation: tangent domain " << format_range(w_lo, w_hi)
           << " (side " << (side == Side::Right ? "R" : "L")
           << ") fails the m\" sign certificate at u=" << u << " (m\"=" << m2
           << ")";
        throw ConstructionError(os.str());
      }
    }
  }

  void emit_angle(double v, const Anchor& left_anchor,
                  const Anchor& right_anchor) {
    const double mR = m_value_direct(Side::Right, left_anchor, f_, eps_, v);
    const double mL = m_value_direct(Side::Left, right_anchor, f_, eps_, v);
    const auto [a1, a2, a0] = angle_coefficients(v, mR, mL, f_, eps_);
    figures_.push_back(AngleFigure{v, a1, a2, a0});
  }

  void emit_structure(std::size_t j) {
    const ForceSpec& F = family_.forces[j];
    auto trimmed = std::make_shared<CupFamily>(*F.cup);
    trimmed->ell_max = std::min(F.ell, F.cup->ell_max);
    trimmed->full = trimmed->ell_max >= 2.0 * eps_ * (1.0 - 1e-9);
    figures_.push_back(CupFigure{trimmed});
    if (cls_[j].right_tr || cls_[j].left_tr) {
      // Polished screen ends, shared with the adjacent tangent-domain anchors.
      const double a = F.screen_a();
      const double b = F.screen_b();
      const auto [b1, b2, b0] = trolleybus_coefficients(a, b, f_);
      const Side side = cls_[j].right_tr ? Side::Right : Side::Left;
      figures_.push_back(TrolleybusFigure{side, a, b, b1, b2, b0});
    }
  }

  const BalancedFamily& family_;
  const BoundaryFunction& f_;
  double eps_;
  double center_ = 0.0;
  std::vector<StructureClass> cls_;
  std::vector<Figure> figures_;
  std::string signature_;
};

bool claims(const TangentDomain& d, Point x, double eps) {
  const double u = u_tangent(x, d.side, eps);
  const double tol = membership_tol(x, eps);
  return u >= d.u_lo - tol && u <= d.u_hi + tol;
}

bool claims(const CupFigure& c, Point x) {
  return locate_chord(*c.cup, x).has_value();
}

bool claims(const AngleFigure& a, Point x, double eps) {
  const double tol = membership_tol(x, eps);
  return u_tangent(x, Side::Left, eps) <= a.v + tol &&
         u_tangent(x, Side::Right, eps) >= a.v - tol;
}

bool claims(const TrolleybusFigure& t, Point x, double eps) {
  const double tol = membership_tol(x, eps);
  const double u = u_tangent(x, t.side, eps);
  if (u < t.a0 - tol || u > t.b0 + tol) return false;
  // The cup below is checked first, so a generous below-chord slack only
  // absorbs the sliver between the polished chord and the cup's interpolated
  // top chord; it never steals interior cup points.
  const double h = height_above(chord_line(t.a0, t.b0), x);
  return h >= -1e-7 * (1.0 + x.x1 * x.x1);
}

}  // namespace

std::string figure_label(const Figure& fig) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, TangentDomain>) {
          return g.side == Side::Right ? "R" : "L";
        } else if constexpr (std::is_same_v<T, CupFigure>) {
          return "cup";
        } else if constexpr (std::is_same_v<T, AngleFigure>) {
          return "angle";
        } else {
          return g.side == Side::Right ? "trR" : "trL";
        }
      },
      fig);
}

std::tuple<double, double, double> angle_coefficients(
    double v, double mR_v, double mL_v, const BoundaryFunction& f,
    double eps) {
  const double f1v = f.f1(v);
  const double scale = 1.0 + std::abs(f1v);
  if (std::abs(mR_v + mL_v - 2.0 * f1v) > 1e-7 * scale) {
    std::ostringstream os;
    os << "angle_coefficients: smoothness identity m_R + m_L = 2f' fails at "
          "v="
       << v << " (residual " << mR_v + mL_v - 2.0 * f1v << ")";
    throw ConstructionError(os.str());
  }
  const double diff = mL_v - mR_v;
  const double alpha2 = diff / (4.0 * eps);
  const double alpha1 = 0.5 * (mR_v + mL_v) - diff * v / (2.0 * eps);
  const double alpha0 =
      f.f(v) - 0.5 * (mR_v + mL_v) * v + diff * v * v / (4.0 * eps);
  return {alpha1, alpha2, alpha0};
}

std::tuple<double, double, double> trolleybus_coefficients(
    double a0, double b0, const BoundaryFunction& f) {
  if (!(a0 < b0)) {
    throw ConstructionError("trolleybus_coefficients: requires a0 < b0");
  }
  const double scale = 1.0 + std::abs(f.f(a0)) + std::abs(f.f(b0));
  const double residual = chord_mismatch(f, a0, b0 - a0);
  if (std::abs(residual) > 1e-8 * scale * (1.0 + (b0 - a0))) {
    std::ostringstream os;
    os << "trolleybus_coefficients: [" << a0 << ", " << b0
       << "] does not satisfy the chord equation (residual " << residual
       << ")";
    throw ConstructionError(os.str());
  }
  const double delta = b0 - a0;
  const double mean2 = (f.f1(b0) - f.f1(a0)) / delta;
  const double beta2 = 0.5 * mean2;
  const double beta1 = (b0 * f.f1(a0) - a0 * f.f1(b0)) / delta;
  const double beta0 =
      (b0 * f.f(a0) - a0 * f.f(b0)) / delta + 0.5 * a0 * b0 * mean2;
  return {beta1, beta2, beta0};
}

Foliation build_foliation(const BalancedFamily& family,
                          const BoundaryFunction& f, double eps) {
  if (family.status != BalanceStatus::CompletelyBalanced) {
    throw ConstructionError(
        "build_foliation: force family is not completely balanced");
  }
  if (family.forces.empty()) {
    throw ConstructionError("build_foliation: empty force family");
  }
  return Builder(family, f, eps).run();
}

Foliation build_foliation(const BoundaryFunction& f, double eps,
                          const BalanceOptions& options, TraceLog* trace) {
  if (!(eps > 0.0)) {
    throw ClassGateError("build_foliation: eps must be positive");
  }
  if (is_finite(f.eps0)) {
    // Hard admission gates for a declared finite growth parameter: the
    // construction's correctness assumes eps stays below it and switch points
    // are far enough apart that neighbouring screens cannot collide.
    if (!(eps < f.eps0)) {
      throw ClassGateError("build_foliation: eps must stay below eps0");
    }
    const double sep = min_separation(f.pattern);
    if (sep < 2.0 * f.eps0) {
      throw ClassGateError(
          "build_foliation: switch separation below twice eps0");
    }
  }
  const BalancedFamily family = balance_all(f, eps, options, trace);
  return build_foliation(family, f, eps);
}

FigureRef locate(Point x, const Foliation& fol) {
  if (classify(x, fol.eps) == StripLocation::Outside) {
    std::ostringstream os;
    os << "locate: point (" << x.x1 << ", " << x.x2
       << ") lies outside the strip";
    throw ConstructionError(os.str());
  }
  for (std::size_t i = 0; i < fol.figures.size(); ++i) {
    const bool hit = std::visit(
        [&](const auto& g) -> bool {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, TangentDomain>) {
            return claims(g, x, fol.eps);
          } else if constexpr (std::is_same_v<T, CupFigure>) {
            return claims(g, x);
          } else if constexpr (std::is_same_v<T, AngleFigure>) {
            return claims(g, x, fol.eps);
          } else {
            return claims(g, x, fol.eps);
          }
        },
        fol.figures[i]);
    if (hit) return FigureRef{i};
  }
  std::ostringstream os;
  os << "locate: no figure claims the point (" << x.x1 << ", " << x.x2 << ")";
  throw ConstructionError(os.str());
}

double eval(Point x, const Foliation& fol, const BoundaryFunction& f) {
  const FigureRef ref = locate(x, fol);
  return std::visit(
      [&](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, TangentDomain>) {
          return eval_tangent(g.coeff, f, x);
        } else if constexpr (std::is_same_v<T, CupFigure>) {
          return eval_cup(*g.cup, f, x);
        } else if constexpr (std::is_same_v<T, AngleFigure>) {
          return g.alpha1 * x.x1 + g.alpha2 * x.x2 + g.alpha0;
        } else {
          return g.beta1 * x.x1 + g.beta2 * x.x2 + g.beta0;
        }
      },
      fol.figures[ref.index]);
}

}  // namespace bellman
