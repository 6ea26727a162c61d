// SPDX-License-Identifier: MIT
#ifndef BELLMAN_FORCES_HPP
#define BELLMAN_FORCES_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bellman/boundary.hpp"
#include "bellman/cups.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// A force function attached to one downward switch point of f‴.
///
/// Finite sources carry a chord family (screen) of current length ell; the
/// force equals the chord-end defect on the screen and propagates off-screen
/// by the damped transport equations.  Infinite sources (source_c = ±∞) have
/// zero screens and use the one-sided improper-integral formulas.
struct ForceSpec {
  ExtendedReal source_c = 0.0;
  std::shared_ptr<const CupFamily> cup;  ///< null for infinite sources
  double ell = 0.0;                      ///< current screen length in [0, 2ε]
  double eps = 0.0;
  std::shared_ptr<const BoundaryFunction> f;

  bool is_infinite() const { return !is_finite(source_c); }
  /// Left screen end a(ell); source_c for zero screens.
  double screen_a() const;
  /// Right screen end b(ell) = a(ell) + ell.
  double screen_b() const;
};

/// Force with the full-length screen of a freshly grown chord family.
ForceSpec force_from_cup(std::shared_ptr<const BoundaryFunction> f,
                         std::shared_ptr<const CupFamily> cup, double eps);

/// Zero-screen force originated at −∞ or +∞.
ForceSpec force_from_infinity(std::shared_ptr<const BoundaryFunction> f,
                              ExtendedReal source, double eps);

/// The force at u.  Three branches: left transport for u < a, on-screen
/// chord-end defect (−d_left on [a, c], +d_right on [c, b], partner end found
/// by inverting the chord table), right transport for u > b.
double force_value(const ForceSpec& F, double u);

/// Maximal interval [t⁻, t⁺] around the source on which the force keeps its
/// tail signs: F ≥ 0 on [t⁻, c] and F ≤ 0 on [c, t⁺].
struct Tails {
  ExtendedReal t_minus = 0.0;
  ExtendedReal t_plus = 0.0;
};

/// Tails by outward marching in steps of ε/16 with exact far-field sign
/// certificates (once past every finite switch point, a force that still has
/// its tail sign keeps it forever when f‴ no longer opposes it); the first
/// violation is bracketed and bisected to 1e-10.  Returns ±∞ when no
/// violation is found up to the truncation horizon.
Tails tails(const ForceSpec& F);

/// Unique root of F1 + F2 on the tail intersection
/// [max(c₁, t₂⁻), min(t₁⁺, c₂)], given sources c₁ < c₂.  Absent when the
/// intersection is empty or the sum does not change sign on it (one force
/// dominates the other).  Pass precomputed tails to skip the marching.
std::optional<double> balance_point(const ForceSpec& F1, const ForceSpec& F2,
                                    const Tails* tails1 = nullptr,
                                    const Tails* tails2 = nullptr);

/// Remove every force whose source lies in a tail of another force
/// (left-to-right scan against the surviving set).  Idempotent; the union of
/// tails never shrinks because a removed source's tails lie inside the
/// dominating force's tail.
std::vector<ForceSpec> clean(std::vector<ForceSpec> family);

/// One structured step of the balancing algorithm, for --trace diagnostics.
struct TraceEvent {
  std::string kind;  ///< "clean", "compress-left", "compress-right", ...
  double source = 0.0;
  double old_ell = 0.0;
  double new_ell = 0.0;
  std::string detail;
};
using TraceLog = std::vector<TraceEvent>;

enum class CompressDirection { LeftPass, RightPass };
enum class BalanceStatus { Balanced, CompletelyBalanced };

/// An ordered family of forces with the balance points between consecutive
/// members.  CompletelyBalanced: no balance point strictly inside a screen,
/// every screen shorter than 2ε has its balance point at one end, and the
/// outermost tails reach ∓∞.
struct BalancedFamily {
  std::vector<ForceSpec> forces;
  std::vector<Tails> force_tails;       ///< aligned with forces
  std::vector<double> balance_points;   ///< size forces.size()−1
  BalanceStatus status = BalanceStatus::Balanced;
};

/// Audit tails, balance points, and status of a force list.
BalancedFamily audit_family(std::vector<ForceSpec> forces);

/// One compression pass.  LeftPass scans pairs left-to-right and shrinks the
/// right screen when the pair's balance point lies strictly inside it (the
/// new length solves −d_left(ℓ) + F_other(a(ℓ)) = 0, putting the balance
/// point at the left end); RightPass mirrors right-to-left shrinking the left
/// screen via d_right(ℓ) + F_other(b(ℓ)) = 0.  Cleans afterwards.  A
/// compression whose length root is not bracketed in (0, ℓ] removes that
/// force instead and records a diagnostic event.
BalancedFamily compress(BalancedFamily family, CompressDirection dir,
                        TraceLog* trace = nullptr);

struct BalanceOptions {
  int pass_cap = 64;           ///< compression rounds before giving up
  bool right_pass_first = false;  ///< reverse pass order (invariance check)
};

/// The whole balancing algorithm: one force per downward switch point with a
/// full 2ε screen (infinite switch points give zero-screen forces), cleaning,
/// then alternating compression passes until no screen changes.  Throws
/// ConstructionError when a chord family cannot reach length 2ε or the pass
/// cap is exceeded.
BalancedFamily balance_all(const BoundaryFunction& f, double eps,
                           const BalanceOptions& options = {},
                           TraceLog* trace = nullptr);

}  // namespace bellman

#endif  // BELLMAN_FORCES_HPP
