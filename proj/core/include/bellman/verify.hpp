// SPDX-License-Identifier: MIT
#ifndef BELLMAN_VERIFY_HPP
#define BELLMAN_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "bellman/boundary.hpp"
#include "bellman/candidate.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// Outcome of one verification suite.  Violations are normalized by the
/// local scale so that `pass ⇔ max_violation ≤ tolerance`.
struct Report {
  std::string suite;
  std::size_t samples = 0;
  double max_violation = 0.0;
  Point worst_point{0.0, 0.0};
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

/// Samples n abscissas over the foliation's finite parameter span ± 5ε and
/// compares eval on the lower parabola against f; violation is
/// |eval − f| / (1 + |f|) against tolerance 1e-9.
Report check_boundary(const Foliation& fol, const BoundaryFunction& f,
                      std::size_t n);

/// Draws n random segments lying inside the strip (exact parabola-crossing
/// rejection) and checks midpoint concavity at five interior combinations;
/// violation is the positive concavity deficit / (1 + max |B|) against 1e-8.
Report check_concavity(const Foliation& fol, const BoundaryFunction& f,
                       std::size_t n_segments, std::uint64_t seed = 1);

/// Finite-difference Hessian checks in figure interiors (points kept clear
/// of figure boundaries): on curved figures the normalized residual
/// |det H| / ‖H‖² stays ≤ 1e-4 and B_{x₁x₁} ≤ 1e-6·scale; on linear figures
/// ‖H‖ itself stays ≤ 1e-6·scale.  Violations are reported in units of
/// their own tolerance, so the report tolerance is 1.
Report check_monge_ampere(const Foliation& fol, const BoundaryFunction& f,
                          std::size_t n, std::uint64_t seed = 2);

/// Independent Monte-Carlo lower bound for the supremum at x: random +
/// greedy search over non-decreasing step functions (≤ 16 blocks), affinely
/// corrected to moments (x₁, x₂) and admitted only when the exact window
/// variance supremum is ≤ ε².  Returns the best ⟨f∘φ⟩ found (−∞ if no
/// feasible candidate appeared, which cannot happen for strip points).
double lower_bound_search(Point x, const BoundaryFunction& f, double eps,
                          std::size_t budget, std::uint64_t seed = 3);

}  // namespace bellman

#endif  // BELLMAN_VERIFY_HPP
