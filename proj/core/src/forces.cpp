// SPDX-License-Identifier: MIT
#include "bellman/forces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bellman/errors.hpp"
#include "bellman/numerics.hpp"
#include "bellman/tangents.hpp"

namespace bellman {

namespace {

// ==== pattern helpers ====

std::vector<double> finite_pattern_points(const SignPattern& p) {
  std::vector<double> pts;
  for (ExtendedReal c : p.c_points) {
    if (is_finite(c)) pts.push_back(c);
  }
  pts.insert(pts.end(), p.v_points.begin(), p.v_points.end());
  std::sort(pts.begin(), pts.end());
  return pts;
}

/// Sign of f‴ on the far right: + when the last downward switch sits at +∞.
int far_right_sign(const SignPattern& p) {
  return is_finite(p.c_points.back()) ? -1 : +1;
}

/// Sign of f‴ on the far left: + when the first downward switch is finite.
int far_left_sign(const SignPattern& p) {
  return is_finite(p.c_points.front()) ? +1 : -1;
}

// ==== incremental transport ====

/// Damped transport of a force value away from the screen.  Both directions
/// damp the carried value (the homogeneous mode decays outward), so marching
/// is numerically stable and each step needs only a local integral.
struct Transport {
  const BoundaryFunction& f;
  double eps;
  QuadratureSettings qs;
  double u;
  double value;

  /// Force at x ≥ u from the current snapshot.
  double probe_right(double x) const {
    const double span = x - u;
    const auto g = [&](double tau) { return f.f3(x + tau); };
    QuadratureSettings st = qs;
    for (double& t : st.split_points) t -= x;  // kinks in the τ variable
    return value * std::exp(-span / eps) +
           weighted_integral(g, -span, 0.0, +1.0, eps, st);
  }
  /// Force at x ≤ u from the current snapshot.
  double probe_left(double x) const {
    const double span = u - x;
    const auto g = [&](double tau) { return f.f3(x + tau); };
    QuadratureSettings st = qs;
    for (double& t : st.split_points) t -= x;  // kinks in the τ variable
    return value * std::exp(-span / eps) +
           weighted_integral(g, 0.0, span, -1.0, eps, st);
  }
  void step_right(double h) {
    value = probe_right(u + h);
    u += h;
  }
  void step_left(double h) {
    value = probe_left(u - h);
    u -= h;
  }
};

struct MarchStart {
  bool trivial = false;  ///< tail already decided without marching
  ExtendedReal trivial_end = 0.0;
  double u0 = 0.0;
  double f0 = 0.0;
};

MarchStart right_march_start(const ForceSpec& F,
                             const std::vector<double>& pts) {
  MarchStart s;
  if (F.source_c == kPosInf) {
    s.trivial = true;
    s.trivial_end = kPosInf;
    return s;
  }
  if (F.is_infinite()) {  // source at −∞
    if (pts.empty()) {    // f‴ ≤ 0 everywhere: the tail sign never breaks
      s.trivial = true;
      s.trivial_end = kPosInf;
      return s;
    }
    s.u0 = pts.front();
    s.f0 = force_value(F, s.u0);
    return s;
  }
  if (F.ell <= 1e-12 * F.eps) {
    s.u0 = F.source_c;
    s.f0 = 0.0;
    return s;
  }
  s.u0 = F.screen_b();
  s.f0 = differentials(*F.f, F.screen_a(), s.u0).d_right;
  return s;
}

MarchStart left_march_start(const ForceSpec& F,
                            const std::vector<double>& pts) {
  MarchStart s;
  if (F.source_c == kNegInf) {
    s.trivial = true;
    s.trivial_end = kNegInf;
    return s;
  }
  if (F.is_infinite()) {  // source at +∞
    if (pts.empty()) {    // f‴ ≥ 0 everywhere
      s.trivial = true;
      s.trivial_end = kNegInf;
      return s;
    }
    s.u0 = pts.back();
    s.f0 = force_value(F, s.u0);
    return s;
  }
  if (F.ell <= 1e-12 * F.eps) {
    s.u0 = F.source_c;
    s.f0 = 0.0;
    return s;
  }
  s.u0 = F.screen_a();
  s.f0 = -differentials(*F.f, s.u0, F.screen_b()).d_left;
  return s;
}

ExtendedReal march_right_tail(const ForceSpec& F,
                              const std::vector<double>& pts) {
  const auto& f = *F.f;
  const MarchStart start = right_march_start(F, pts);
  if (start.trivial) return start.trivial_end;
  const double eps = F.eps;
  const double h = eps / 16.0;
  const bool may_certify = far_right_sign(f.pattern) < 0;
  const double last_pt = pts.empty() ? start.u0 : pts.back();
  const double horizon = std::max(start.u0, last_pt) + 200.0 * eps;
  Transport t{f, eps, f.quadrature(), start.u0, start.f0};
  if (t.value > 0.0) return t.u;  // tail ends at the screen itself
  while (true) {
    if (may_certify && t.u >= last_pt) return kPosInf;
    if (t.u > horizon) return kPosInf;
    const Transport snap = t;
    t.step_right(h);
    if (t.value > 0.0) {
      const auto g = [&](double x) { return snap.probe_right(x); };
      return find_root_monotone(g, snap.u, t.u,
                                1e-10 * (1.0 + std::abs(t.u)));
    }
  }
}

ExtendedReal march_left_tail(const ForceSpec& F,
                             const std::vector<double>& pts) {
  const auto& f = *F.f;
  const MarchStart start = left_march_start(F, pts);
  if (start.trivial) return start.trivial_end;
  const double eps = F.eps;
  const double h = eps / 16.0;
  const bool may_certify = far_left_sign(f.pattern) > 0;
  const double first_pt = pts.empty() ? start.u0 : pts.front();
  const double horizon = std::min(start.u0, first_pt) - 200.0 * eps;
  Transport t{f, eps, f.quadrature(), start.u0, start.f0};
  if (t.value < 0.0) return t.u;
  while (true) {
    if (may_certify && t.u <= first_pt) return kNegInf;
    if (t.u < horizon) return kNegInf;
    const Transport snap = t;
    t.step_left(h);
    if (t.value < 0.0) {
      const auto g = [&](double x) { return snap.probe_left(x); };
      return find_root_monotone(g, t.u, snap.u,
                                1e-10 * (1.0 + std::abs(t.u)));
    }
  }
}

// ==== cleaning / compression internals ====

std::string format_source(ExtendedReal c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

void trace_push(TraceLog* trace, std::string kind, double source,
                double old_ell, double new_ell, std::string detail) {
  if (trace == nullptr) return;
  trace->push_back(TraceEvent{std::move(kind), source, old_ell, new_ell,
                              std::move(detail)});
}

std::vector<ForceSpec> clean_with_trace(std::vector<ForceSpec> family,
                                        TraceLog* trace) {
  const std::size_t n = family.size();
  std::vector<Tails> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = tails(family[i]);
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || !alive[k]) continue;
      if (ts[k].t_minus <= family[i].source_c &&
          family[i].source_c <= ts[k].t_plus) {
        alive[i] = false;
        trace_push(trace, "clean", family[i].source_c, family[i].ell,
                   family[i].ell,
                   "source dominated by force at " +
                       format_source(family[k].source_c));
        break;
      }
    }
  }
  std::vector<ForceSpec> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) kept.push_back(std::move(family[i]));
  }
  return kept;
}

double end_tolerance(double v) { return 1e-9 * (1.0 + std::abs(v)); }

/// One directional sweep; returns true when any screen changed or a force
/// was dropped.  family must stay ordered by source.
bool compress_pass(std::vector<ForceSpec>& forces, CompressDirection dir,
                   TraceLog* trace) {
  bool changed = false;
  if (forces.size() < 2) return false;

  if (dir == CompressDirection::LeftPass) {
    // Left-to-right: put each interior balance point onto the left end of
    // the right screen by shrinking that screen.
    std::size_t j = 0;
    while (j + 1 < forces.size()) {
      ForceSpec& right = forces[j + 1];
      if (right.is_infinite() || right.ell <= 0.0) {
        ++j;
        continue;
      }
      const auto v = balance_point(forces[j], right);
      if (!v || *v <= right.screen_a() + end_tolerance(*v)) {
        ++j;
        continue;
      }
      const ForceSpec& other = forces[j];
      // Polished left end: the audit re-measures the balance with the exact
      // screen ends, so the length equation must use them as well.
      const auto g = [&](double ell) {
        const double a =
            refine_chord_left_end(*right.f, right.cup->a_of_ell(ell), ell);
        const auto d = differentials(*right.f, a, a + ell);
        return -d.d_left + force_value(other, a);
      };
      const double lo = 1e-6 * right.eps;
      const double hi = right.ell;
      if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
        trace_push(trace, "compress-left-unbracketed", right.source_c,
                   right.ell, 0.0,
                   "length equation has no root; dropping the force");
        forces.erase(forces.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        changed = true;
        continue;  // re-pair j with the next survivor
      }
      const double ell_star =
          find_root_monotone(g, lo, hi, 1e-12 * (1.0 + 2.0 * right.eps));
      trace_push(trace, "compress-left", right.source_c, right.ell, ell_star,
                 "balance moved to the left screen end");
      right.ell = ell_star;
      changed = true;
      ++j;
    }
    return changed;
  }

  // RightPass, right-to-left: put each interior balance point onto the right
  // end of the left screen.
  std::size_t j = forces.size() - 1;
  while (j > 0) {
    ForceSpec& left = forces[j - 1];
    if (left.is_infinite() || left.ell <= 0.0) {
      --j;
      continue;
    }
    const auto v = balance_point(left, forces[j]);
    if (!v || *v >= left.screen_b() - end_tolerance(*v)) {
      --j;
      continue;
    }
    const ForceSpec& other = forces[j];
    const auto g = [&](double ell) {
      const double a =
          refine_chord_left_end(*left.f, left.cup->a_of_ell(ell), ell);
      const double b = a + ell;
      const auto d = differentials(*left.f, a, b);
      return d.d_right + force_value(other, b);
    };
    const double lo = 1e-6 * left.eps;
    const double hi = left.ell;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
      trace_push(trace, "compress-right-unbracketed", left.source_c, left.ell,
                 0.0, "length equation has no root; dropping the force");
      forces.erase(forces.begin() + static_cast<std::ptrdiff_t>(j) - 1);
      changed = true;
      --j;
      continue;
    }
    const double ell_star =
        find_root_monotone(g, lo, hi, 1e-12 * (1.0 + 2.0 * left.eps));
    trace_push(trace, "compress-right", left.source_c, left.ell, ell_star,
               "balance moved to the right screen end");
    left.ell = ell_star;
    changed = true;
    --j;
  }
  return changed;
}

}  // namespace

// ==== ForceSpec ====

double ForceSpec::screen_a() const {
  if (is_infinite() || cup == nullptr) return source_c;
  // Interpolated table value polished to the exact chord equation: screen-end
  // anchors and straight-figure coefficients consume this directly.
  return refine_chord_left_end(*f, cup->a_of_ell(ell), ell);
}

double ForceSpec::screen_b() const {
  if (is_infinite() || cup == nullptr) return source_c;
  return screen_a() + ell;
}

ForceSpec force_from_cup(std::shared_ptr<const BoundaryFunction> f,
                         std::shared_ptr<const CupFamily> cup, double eps) {
  if (!f || !cup) throw ConstructionError("force_from_cup: null input");
  ForceSpec F;
  F.source_c = cup->origin_c;
  F.ell = cup->ell_max;
  F.cup = std::move(cup);
  F.eps = eps;
  F.f = std::move(f);
  return F;
}

ForceSpec force_from_infinity(std::shared_ptr<const BoundaryFunction> f,
                              ExtendedReal source, double eps) {
  if (!f) throw ConstructionError("force_from_infinity: null input");
  if (is_finite(source)) {
    throw ConstructionError("force_from_infinity: source must be ±∞");
  }
  ForceSpec F;
  F.source_c = source;
  F.ell = 0.0;
  F.eps = eps;
  F.f = std::move(f);
  return F;
}

// ==== force evaluation ====

double force_value(const ForceSpec& F, double u) {
  const auto& f = *F.f;
  const double eps = F.eps;
  if (F.source_c == kNegInf) {
    return eps * m_second_direct(Side::Right, Anchor::from_infinity(), f, eps,
                                 u);
  }
  if (F.source_c == kPosInf) {
    return eps * m_second_direct(Side::Left, Anchor::from_infinity(), f, eps,
                                 u);
  }
  const double c = F.source_c;
  if (F.ell <= 1e-12 * eps || F.cup == nullptr) {
    return convolve_force(f.f3, c, u, eps, f.quadrature());
  }
  const double a = F.screen_a();
  const double b = F.screen_b();
  if (u > b) {
    return eps *
           m_second_direct(Side::Right, Anchor::screen_end(a, b), f, eps, u);
  }
  if (u < a) {
    return eps *
           m_second_direct(Side::Left, Anchor::screen_end(a, b), f, eps, u);
  }
  // On the screen: the defect of the chord whose end passes through u.  The
  // inversion runs over the polished family so its end points agree with the
  // refined screen ends used for the branch selection above; otherwise a u
  // between the interpolated and exact ends would escape the bracket.
  const double micro = 1e-12 * (1.0 + std::abs(c));
  if (std::abs(u - c) <= micro) return 0.0;
  const double root_tol = 1e-12 * (1.0 + 2.0 * eps);
  const auto a_exact = [&](double ell) {
    return refine_chord_left_end(f, F.cup->a_of_ell(ell), ell);
  };
  if (u > c) {
    const auto h = [&](double ell) { return a_exact(ell) + ell - u; };
    const double ell = find_root_monotone(h, 0.0, F.ell, root_tol);
    return differentials(f, u - ell, u).d_right;
  }
  const auto h = [&](double ell) { return a_exact(ell) - u; };
  const double ell = find_root_monotone(h, 0.0, F.ell, root_tol);
  return -differentials(f, u, u + ell).d_left;
}

Tails tails(const ForceSpec& F) {
  const auto pts = finite_pattern_points(F.f->pattern);
  Tails T;
  T.t_minus = march_left_tail(F, pts);
  T.t_plus = march_right_tail(F, pts);
  return T;
}

std::optional<double> balance_point(const ForceSpec& F1, const ForceSpec& F2,
                                    const Tails* tails1, const Tails* tails2) {
  if (!(F1.source_c < F2.source_c)) {
    throw ConstructionError("balance_point: sources must be strictly ordered");
  }
  const Tails T1 = tails1 != nullptr ? *tails1 : tails(F1);
  const Tails T2 = tails2 != nullptr ? *tails2 : tails(F2);
  const ExtendedReal lo = std::max(F1.source_c, T2.t_minus);
  const ExtendedReal hi = std::min(T1.t_plus, F2.source_c);
  if (lo > hi) return std::nullopt;

  // Finite probe window: landmarks always exist because two ordered sources
  // enclose at least one finite switch point.
  const double eps = F1.eps;
  double land_lo = kPosInf;
  double land_hi = kNegInf;
  const auto note = [&](ExtendedReal x) {
    if (!is_finite(x)) return;
    land_lo = std::min(land_lo, static_cast<double>(x));
    land_hi = std::max(land_hi, static_cast<double>(x));
  };
  note(lo);
  note(hi);
  note(F1.source_c);
  note(F2.source_c);
  if (!F1.is_infinite()) {
    note(F1.screen_a());
    note(F1.screen_b());
  }
  if (!F2.is_infinite()) {
    note(F2.screen_a());
    note(F2.screen_b());
  }
  for (double p : finite_pattern_points(F1.f->pattern)) note(p);
  if (!(land_lo <= land_hi)) return std::nullopt;

  const double flo = is_finite(lo) ? static_cast<double>(lo)
                                   : land_lo - 50.0 * eps;
  const double fhi = is_finite(hi) ? static_cast<double>(hi)
                                   : land_hi + 50.0 * eps;
  if (!(flo < fhi)) return flo;

  const auto sum = [&](double u) {
    return force_value(F1, u) + force_value(F2, u);
  };
  const double s_lo = sum(flo);
  const double s_hi = sum(fhi);
  if (s_lo > 0.0 || s_hi < 0.0) return std::nullopt;  // one force dominates
  if (s_lo == 0.0) return flo;
  if (s_hi == 0.0) return fhi;
  const double tol = 1e-11 * (1.0 + std::max(std::abs(flo), std::abs(fhi)));
  return find_root_monotone(sum, flo, fhi, tol);
}

std::vector<ForceSpec> clean(std::vector<ForceSpec> family) {
  return clean_with_trace(std::move(family), nullptr);
}

// ==== family audit ====

BalancedFamily audit_family(std::vector<ForceSpec> forces) {
  BalancedFamily fam;
  fam.forces = std::move(forces);
  const std::size_t n = fam.forces.size();
  fam.force_tails.resize(n);
  for (std::size_t i = 0; i < n; ++i) fam.force_tails[i] = tails(fam.forces[i]);

  bool complete = n > 0;
  if (n > 0) {
    complete = complete && fam.force_tails.front().t_minus == kNegInf &&
               fam.force_tails.back().t_plus == kPosInf;
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto v = balance_point(fam.forces[j], fam.forces[j + 1],
                                 &fam.force_tails[j], &fam.force_tails[j + 1]);
    if (!v) {
      fam.balance_points.push_back(
          std::numeric_limits<double>::quiet_NaN());
      complete = false;
      continue;
    }
    fam.balance_points.push_back(*v);
  }
  // Balance points may not sit strictly inside a screen; short screens must
  // have one at an end.
  for (std::size_t i = 0; i < n && complete; ++i) {
    const ForceSpec& F = fam.forces[i];
    if (F.is_infinite() || F.ell <= 0.0) continue;
    const double a = F.screen_a();
    const double b = F.screen_b();
    bool at_end = false;
    const auto consider = [&](double v) {
      const double tol = end_tolerance(v);
      if (v > a + tol && v < b - tol) complete = false;
      if (std::abs(v - a) <= tol || std::abs(v - b) <= tol) at_end = true;
    };
    if (i > 0) consider(fam.balance_points[i - 1]);
    if (i < n - 1) consider(fam.balance_points[i]);
    const bool full = F.ell >= 2.0 * F.eps * (1.0 - 1e-9);
    if (!full && !at_end) complete = false;
  }
  fam.status = complete ? BalanceStatus::CompletelyBalanced
                        : BalanceStatus::Balanced;
  return fam;
}

BalancedFamily compress(BalancedFamily family, CompressDirection dir,
                        TraceLog* trace) {
  auto forces = std::move(family.forces);
  compress_pass(forces, dir, trace);
  forces = clean_with_trace(std::move(forces), trace);
  return audit_family(std::move(forces));
}

BalancedFamily balance_all(const BoundaryFunction& f, double eps,
                           const BalanceOptions& options, TraceLog* trace) {
  if (!(eps > 0.0)) throw ConfigError("balance_all: eps must be positive");
  if (is_finite(f.eps0) && !(eps < f.eps0)) {
    throw ClassGateError(
        "balance_all: eps must stay below the growth parameter of the "
        "boundary function");
  }
  auto fp = std::make_shared<const BoundaryFunction>(f);
  std::vector<ForceSpec> forces;
  for (ExtendedReal c : f.pattern.c_points) {
    if (!is_finite(c)) {
      forces.push_back(force_from_infinity(fp, c, eps));
      continue;
    }
    CupFamily cup = grow_cup(*fp, c, eps);
    if (!cup.full) {
      throw ConstructionError(
          "balance_all: chord family at source " + format_source(c) +
          " is obstructed before reaching full length");
    }
    forces.push_back(force_from_cup(
        fp, std::make_shared<const CupFamily>(std::move(cup)), eps));
  }

  forces = clean_with_trace(std::move(forces), trace);
  const CompressDirection first = options.right_pass_first
                                      ? CompressDirection::RightPass
                                      : CompressDirection::LeftPass;
  const CompressDirection second = options.right_pass_first
                                       ? CompressDirection::LeftPass
                                       : CompressDirection::RightPass;
  for (int pass = 0;; ++pass) {
    if (pass >= options.pass_cap) {
      throw ConstructionError(
          "balance_all: compression did not settle within the pass cap");
    }
    bool changed = false;
    for (CompressDirection dir : {first, second}) {
      changed = compress_pass(forces, dir, trace) || changed;
      const std::size_t before = forces.size();
      forces = clean_with_trace(std::move(forces), trace);
      changed = changed || forces.size() != before;
    }
    if (!changed) break;
  }
  return audit_family(std::move(forces));
}

}  // namespace bellman
