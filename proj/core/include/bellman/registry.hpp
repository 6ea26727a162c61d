// SPDX-License-Identifier: MIT
#ifndef BELLMAN_REGISTRY_HPP
#define BELLMAN_REGISTRY_HPP

#include <map>
#include <string>
#include <vector>

#include "bellman/boundary.hpp"

namespace bellman {

/// f(t) = e^{±t}.  Growth parameter 1.
BoundaryFunction make_exponential(int sign);

/// f(t) = ±t³.
BoundaryFunction make_cubic(int sign);

/// f(t) = |t|^p, p > 2.
BoundaryFunction make_power(double p);

/// f(t) = t⁴/24 − a·t³/6  (third derivative t − a).
BoundaryFunction make_quartic_plus(double a);

/// f(t) = −(t − c)⁴.
BoundaryFunction make_quartic_minus(double c);

/// f(t) = t⁵/60 − d·t³/6, d > 0  (third derivative t² − d).
BoundaryFunction make_quintic(double d);

/// f(t) = e^t for t ≥ 0 and −α³e^{t/α} + t²(1+α)/2 + t(1+α²) + 1 + α³ for
/// t < 0; C² at zero with third derivative −e^{t/α} < 0 < e^t.  α > 0.
BoundaryFunction make_two_exp(double alpha);

/// The C² spline with third derivative −t² on t ≤ 0 and t on t > 0
/// (f, f′, f″ all vanish at the origin).
BoundaryFunction make_example6();

/// A boundary function from a custom piecewise-polynomial third derivative
/// and the anchor values f(0), f′(0), f″(0).  The sign pattern is detected by
/// scanning a window that pads the breakpoint span; `eps0` is the caller's
/// declared growth parameter (use +∞ for polynomials).
BoundaryFunction make_piecewise(const PiecewisePoly& f3, double f0,
                                double f1_at_0, double f2_at_0, double eps0);

/// Name-based construction for the CLI/config registry.  Known names:
///   "exp+", "exp-", "cubic+", "cubic-", "power" (param p),
///   "quartic+" (param a), "quartic-" (param c), "quintic" (param d),
///   "two-exp" (param alpha), "example6".
/// Unknown names or missing parameters raise ConfigError.
BoundaryFunction make_builtin(const std::string& name,
                              const std::map<std::string, double>& params = {});

/// The names make_builtin accepts, in registry order.
std::vector<std::string> builtin_names();

}  // namespace bellman

#endif  // BELLMAN_REGISTRY_HPP
