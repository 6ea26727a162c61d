// SPDX-License-Identifier: MIT
#ifndef BELLMAN_CANDIDATE_HPP
#define BELLMAN_CANDIDATE_HPP

#include <memory>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/cups.hpp"
#include "bellman/forces.hpp"
#include "bellman/geometry.hpp"
#include "bellman/tangents.hpp"

namespace bellman {

/// One-parameter family of extremal segments; the candidate is affine along
/// each segment.  A Right domain with parameters u ∈ [u_lo, u_hi] owns the
/// points with u_R(x) in that range (segments lean left: x₁ ∈ [u−ε, u]);
/// a Left domain owns u_L(x) ∈ [u_lo, u_hi].
struct TangentDomain {
  Side side = Side::Right;
  ExtendedReal u_lo = 0.0;
  ExtendedReal u_hi = 0.0;
  TangentCoefficient coeff;
};

/// Chord family region: below the top chord of its (possibly compressed)
/// screen, foliated by chords; the candidate interpolates f linearly along
/// each chord.
struct CupFigure {
  std::shared_ptr<const CupFamily> cup;
};

/// Linear piece B = α₁x₁ + α₂x₂ + α₀ on the angle region
/// Ω_ang(v) = {u_L(x) ≤ v ≤ u_R(x)}.
struct AngleFigure {
  double v = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha0 = 0.0;
};

/// Linear piece B = β₁x₁ + β₂x₂ + β₀ above the top chord of a compressed
/// screen [a0, b0], between the two side tangent segments of the `side`
/// family (Right: both neighbours are Right domains; Left: both Left).
struct TrolleybusFigure {
  Side side = Side::Right;
  double a0 = 0.0;
  double b0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta0 = 0.0;
};

using Figure =
    std::variant<TangentDomain, CupFigure, AngleFigure, TrolleybusFigure>;

/// Label for reports and CSV output: "R", "L", "cup", "angle", "trR", "trL".
std::string figure_label(const Figure& fig);

/// The assembled global candidate: figures ordered left to right covering the
/// strip, and the signature string (one letter per tangent domain).
struct Foliation {
  std::vector<Figure> figures;
  std::string signature;
  double eps = 0.0;
};

/// Index of a figure inside a Foliation.
struct FigureRef {
  std::size_t index = 0;
};

/// Coefficients (α₁, α₂, α₀) of the angle plane at vertex v from the two
/// one-sided slope coefficients.  Requires the smoothness identity
/// m_R(v) + m_L(v) = 2f′(v) to hold to 1e-7·scale — its failure indicates a
/// mis-balanced family and raises ConstructionError.
std::tuple<double, double, double> angle_coefficients(
    double v, double mR_v, double mL_v, const BoundaryFunction& f, double eps);

/// Coefficients (β₁, β₂, β₀) of the trolleybus plane over the screen
/// [a0, b0]; the plane interpolates f at both screen ends and carries
/// ∂B/∂x₂ = ⟨f″⟩/2.  Requires [a0, b0] to satisfy the chord equation.
std::tuple<double, double, double> trolleybus_coefficients(
    double a0, double b0, const BoundaryFunction& f);

/// Assemble the candidate from a completely balanced family: cups for finite
/// screens, trolleybuses over compressed screens (on the side whose end
/// carries the balance point), angles at interior balance points, tangent
/// domains in the gaps.  Verifies the m″ sign certificate on every tangent
/// domain (≤ 0 on Right, ≥ 0 on Left).
Foliation build_foliation(const BalancedFamily& family,
                          const BoundaryFunction& f, double eps);

/// Convenience: balance_all + build_foliation.
Foliation build_foliation(const BoundaryFunction& f, double eps,
                          const BalanceOptions& options = {},
                          TraceLog* trace = nullptr);

/// Deterministic dispatch of a strip point to the figure that owns it; ties
/// at shared boundaries resolve to the leftmost figure.  Throws
/// ConstructionError when x is outside the strip or unclaimed.
FigureRef locate(Point x, const Foliation& fol);

/// Value of the candidate at x.
double eval(Point x, const Foliation& fol, const BoundaryFunction& f);

}  // namespace bellman

#endif  // BELLMAN_CANDIDATE_HPP
