// SPDX-License-Identifier: MIT
#ifndef BELLMAN_TANGENTS_HPP
#define BELLMAN_TANGENTS_HPP

#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// Where a tangent-family coefficient gets its integration constant.
///
/// The slope coefficient m of a tangent-domain candidate solves the
/// first-order equation ±εm′ + m = f′ (Right: +, Left: −).  The bounded
/// solution is fixed either by decay at the far infinity (FromInfinity), by
/// matching a chord of the lower parabola with ends [a0, b0] (ScreenEnd), or
/// by an explicit homogeneous term A·e^{∓(u−at)/ε} added to the FromInfinity
/// solution (FreeConstant; used to build deliberate counterexamples in
/// tests).
enum class AnchorKind { FromInfinity, ScreenEnd, FreeConstant };

struct Anchor {
  AnchorKind kind = AnchorKind::FromInfinity;
  double a0 = 0.0;        ///< ScreenEnd: left chord end
  double b0 = 0.0;        ///< ScreenEnd: right chord end
  double amplitude = 0.0; ///< FreeConstant: A
  double at = 0.0;        ///< FreeConstant: abscissa where the term equals A

  static Anchor from_infinity() { return {}; }
  static Anchor screen_end(double a0, double b0) {
    Anchor a;
    a.kind = AnchorKind::ScreenEnd;
    a.a0 = a0;
    a.b0 = b0;
    return a;
  }
  static Anchor free_constant(double amplitude, double at) {
    Anchor a;
    a.kind = AnchorKind::FreeConstant;
    a.amplitude = amplitude;
    a.at = at;
    return a;
  }
};

/// Stateless evaluation of the anchored slope coefficient m(u).
///
/// Right family:  m(u) = ε⁻¹∫_{−∞}^{u} f′(t)e^{(t−u)/ε}dt      (FromInfinity)
///                m(u) = M·e^{(b0−u)/ε} + ε⁻¹∫_{b0}^{u} f′(t)e^{(t−u)/ε}dt
///                with M = f′(b0) − ε⟨f″⟩_{[a0,b0]}             (ScreenEnd)
/// Left family mirrors with the weight e^{(u−t)/ε} and
///                M = f′(a0) + ε⟨f″⟩_{[a0,b0]}.
/// All integrals are evaluated in the shifted variable τ = t − u so no
/// exponential overflows.
double m_value_direct(Side side, const Anchor& anchor,
                      const BoundaryFunction& f, double eps, double u);

/// Stateless evaluation of m″(u): same structure with f‴ in place of f′ and
/// the chord-end defects D_R = f″(b0) − ⟨f″⟩, D_L = f″(a0) − ⟨f″⟩ as the
/// anchored amplitudes (Right: +ε⁻¹D_R, Left: −ε⁻¹D_L).
double m_second_direct(Side side, const Anchor& anchor,
                       const BoundaryFunction& f, double eps, double u);

/// An anchored tangent-family coefficient with a checkpoint cache.
///
/// The cache stores (m, m″) on a uniform grid and extends from the nearest
/// checkpoint in the numerically stable direction (rightward for the Right
/// family, leftward for the Left family — the homogeneous mode decays that
/// way, so checkpoint error is damped, never amplified).  prime() builds the
/// grid; afterwards evaluation is read-only and safe to share across threads.
/// Evaluations outside the primed window fall back to the direct integrals.
class TangentCoefficient {
 public:
  TangentCoefficient(Side side, Anchor anchor, BoundaryFunction f, double eps);

  /// Tabulate checkpoints spaced ε/2 covering [lo, hi].
  void prime(double lo, double hi);

  /// The slope coefficient m(u).
  double m_value(double u) const;

  /// Its second derivative m″(u).
  double m_second(double u) const;

  /// m′(u) from the defining relation (Right: (f′−m)/ε, Left: (m−f′)/ε).
  double m_derivative(double u) const;

  Side side() const { return side_; }
  double eps() const { return eps_; }
  const Anchor& anchor() const { return anchor_; }
  const BoundaryFunction& boundary() const { return f_; }

 private:
  /// Index of the cached checkpoint to extend from, or npos outside window.
  std::size_t checkpoint_for(double u) const;

  Side side_;
  Anchor anchor_;
  BoundaryFunction f_;
  double eps_;
  std::vector<double> grid_u_, grid_m_, grid_m2_;
};

/// Candidate value carried by the tangent segment through x:
///   B(x) = m(u)(x₁ − u) + f(u)  with u the coefficient's family parameter
/// at x.  Precondition: x lies in the closed strip.
double eval_tangent(const TangentCoefficient& coeff, const BoundaryFunction& f,
                    Point x);

}  // namespace bellman

#endif  // BELLMAN_TANGENTS_HPP
