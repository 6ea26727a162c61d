// SPDX-License-Identifier: MIT
#ifndef BELLMAN_BOUNDARY_HPP
#define BELLMAN_BOUNDARY_HPP

#include <functional>
#include <string>
#include <vector>

#include "bellman/geometry.hpp"
#include "bellman/numerics.hpp"

namespace bellman {

/// Sign layout of the third derivative of a boundary function.
///
/// The admissible class alternates: f‴ > 0 up to a *downward switch point*
/// (stored in `c_points`), then f‴ < 0 down to an *upward switch point*
/// (stored in `v_points`), and so on.  The first entry of `c_points` is −∞
/// when f‴ is negative on the far left, and the last is +∞ when f‴ is
/// positive on the far right, so the lists always interleave as
///   c₀ < v₁ < c₁ < … < v_N < c_N   with  #c = #v + 1,
/// every `v_points` entry finite.
struct SignPattern {
  std::vector<ExtendedReal> c_points;
  std::vector<double> v_points;
};

/// A boundary function f with its first three derivatives, its exponential
/// growth parameter and its third-derivative sign layout.  `eps0` bounds the
/// growth of f and its derivatives by C·e^{|t|/eps0} (+∞ for polynomial
/// growth); every strip half-width ε the library is asked to run at must
/// satisfy ε < eps0.
struct BoundaryFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  std::function<double(double)> f3;
  double eps0 = kPosInf;
  SignPattern pattern;
  /// Abscissas where f‴ jumps or kinks (piecewise breakpoints, splice
  /// points); quadrature panels must break there.
  std::vector<double> kinks;

  /// Quadrature settings pre-loaded with this function's growth bound and
  /// the known non-smooth abscissas of f‴.
  QuadratureSettings quadrature() const {
    QuadratureSettings s;
    if (is_finite(eps0)) s.envelope_rate = 1.0 / eps0;
    s.split_points = kinks;
    return s;
  }
};

/// Parameters of the substitution g(t) = c·f(a·t + b) + d·t² + alpha·t + beta,
/// which maps one admissible boundary function to another (a ≠ 0, c ≠ 0).
struct AffineTransform {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  double d = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// A piecewise polynomial: breakpoints t₁ < … < t_m split the line into m+1
/// cells; cell i carries raw power-basis coefficients (value = Σ c_j·t^j).
/// Used for custom third derivatives and the polynomial built-ins.
class PiecewisePoly {
 public:
  PiecewisePoly() : pieces_(1) {}
  PiecewisePoly(std::vector<double> breakpoints,
                std::vector<std::vector<double>> pieces);

  double operator()(double t) const;

  /// The antiderivative that takes `anchor_value` at `anchor_t`, as a
  /// piecewise polynomial continuous across every breakpoint.
  PiecewisePoly antiderivative(double anchor_t, double anchor_value) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> pieces_;
};

/// Reconstruct the sign layout of `f3` by uniform scan over [lo, hi] plus
/// bisection refinement of each sign change.  The sign at `lo` (resp. `hi`)
/// is assumed to persist to −∞ (resp. +∞).  Throws ClassGateError when no
/// strict sign is found or the alternation is violated.
SignPattern detect_pattern(const std::function<double(double)>& f3, double lo,
                           double hi, int samples = 2048);

/// Smallest distance between a finite downward and a finite upward switch
/// point (+∞ when one of the lists has no finite entry).  The admissibility
/// gate for a declared growth parameter ε₀ is min_separation ≥ 2ε₀.
double min_separation(const SignPattern& pattern);

/// The boundary function g(t) = c·f(a·t + b) + d·t² + alpha·t + beta obtained
/// from `f`.  Derivatives compose exactly; the growth parameter rescales to
/// eps0/|a|; switch points map through t ↦ (t − b)/a, swapping their
/// down/up roles when c < 0 and exchanging the two far ends when a < 0.
BoundaryFunction affine_pushforward(const BoundaryFunction& f,
                                    const AffineTransform& t);

}  // namespace bellman

#endif  // BELLMAN_BOUNDARY_HPP
