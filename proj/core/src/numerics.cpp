// SPDX-License-Identifier: MIT
#include "bellman/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bellman/errors.hpp"

namespace bellman {

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double a, b;
  double value;
  double error;
};

/// One non-adaptive 15-point Gauss–Kronrod application.
Panel evaluate_panel(const std::function<double(double)>& h, double a,
                     double b) {
  Panel p{a, b, 0.0, 0.0};
  p.value = GaussKronrod::integrate(h, a, b, 0, 0.0, &p.error);
  if (!std::isfinite(p.value)) {
    throw AccuracyError("weighted_integral: non-finite panel value");
  }
  return p;
}

/// Globally adaptive bisection over a fixed finite interval.  Deterministic:
/// the worst panel splits first, ties resolved to the leftmost panel.  The
/// initial panels break at the declared non-smooth abscissas: a panel with a
/// jump strictly inside can fool the embedded error estimate.
double adaptive_integral(const std::function<double(double)>& h, double a,
                         double b, const QuadratureSettings& s) {
  if (a == b) return 0.0;
  std::vector<double> cuts;
  cuts.push_back(a);
  for (const double t : s.split_points) {
    if (t > a && t < b) cuts.push_back(t);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      panels.push_back(evaluate_panel(h, cuts[i], cuts[i + 1]));
    }
  }
  int splits = 0;
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      err += p.error;
    }
    if (err <= std::max(s.abs_tol, s.rel_tol * std::abs(total))) return total;
    if (splits >= s.max_subdivisions) {
      throw AccuracyError("weighted_integral: subdivision limit exhausted");
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const Panel split = panels[worst];
    const double mid = 0.5 * (split.a + split.b);
    if (mid <= split.a || mid >= split.b) {
      // Interval at round-off resolution; accept the current estimate.
      double v = 0.0;
      for (const Panel& p : panels) v += p.value;
      return v;
    }
    panels[worst] = evaluate_panel(h, split.a, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                  evaluate_panel(h, mid, split.b));
    ++splits;
  }
}

/// Fitted exponential envelope |g(t)| ≤ C·e^{ρ·(anchor−t)·dir} for points on
/// the far side of `anchor` in direction `dir` (dir = −1: t < anchor,
/// dir = +1: t > anchor).  Distances are measured in units of ε marches.
struct Envelope {
  double C = 0.0;    // amplitude at the anchor
  double rho = 0.0;  // growth rate per unit t away from the anchor, ≥ 0
};

Envelope fit_envelope(const std::function<double(double)>& g, double anchor,
                      double dir, double eps) {
  static constexpr int kMarches[] = {1, 2, 3, 5, 10, 15, 20};
  double samples[std::size(kMarches)];
  for (std::size_t i = 0; i < std::size(kMarches); ++i) {
    samples[i] = std::abs(g(anchor + dir * kMarches[i] * eps));
  }
  Envelope env;
  for (double v : samples) env.C = std::max(env.C, v);
  // Growth estimate from the outermost consecutive pairs (k = 5,10,15,20).
  for (std::size_t i = 4; i + 1 < std::size(kMarches); ++i) {
    const double near = samples[i], far = samples[i + 1];
    if (near > 0.0 && far > near) {
      const double dist = (kMarches[i + 1] - kMarches[i]) * eps;
      env.rho = std::max(env.rho, std::log(far / near) / dist);
    }
  }
  return env;
}

/// Truncation distance d beyond which the tail mass of C·e^{ρd}·e^{−λd}/ (λ−ρ)
/// drops below `budget`.  Requires λ > ρ.
double truncation_distance(const Envelope& env, double lambda, double budget,
                           double eps) {
  const double margin = lambda - env.rho;
  if (env.C <= 0.0) return 5.0 * eps;
  const double d = std::log(std::max(env.C / (margin * budget), 1.0)) / margin;
  return std::max(d, 5.0 * eps) + 5.0 * eps;
}

}  // namespace

double weighted_integral(const std::function<double(double)>& g,
                         ExtendedReal lo, ExtendedReal hi, double rate,
                         double eps, const QuadratureSettings& s) {
  if (!(eps > 0.0)) throw AccuracyError("weighted_integral: eps must be > 0");
  if (lo > hi) return -weighted_integral(g, hi, lo, rate, eps, s);
  if (lo == hi) return 0.0;

  const bool lo_inf = !is_finite(lo);
  const bool hi_inf = !is_finite(hi);
  if (lo_inf && hi_inf) {
    // Split at the weight-neutral origin; each half checks its own regime.
    return weighted_integral(g, lo, 0.0, rate, eps, s) +
           weighted_integral(g, 0.0, hi, rate, eps, s);
  }

  const double lambda = std::abs(rate) / eps;
  if (lo_inf || hi_inf) {
    if (rate == 0.0 || (lo_inf && rate < 0.0) || (hi_inf && rate > 0.0)) {
      throw DivergenceError(
          "weighted_integral: weight does not decay toward the infinite "
          "endpoint");
    }
    if (s.envelope_rate > 0.0 && lambda <= s.envelope_rate * (1.0 + 1e-14)) {
      throw DivergenceError(
          "weighted_integral: weight decay does not dominate the declared "
          "integrand growth");
    }
    const double anchor = lo_inf ? static_cast<double>(hi)
                                 : static_cast<double>(lo);
    const double dir = lo_inf ? -1.0 : +1.0;
    Envelope env = fit_envelope(g, anchor, dir, eps);
    if (s.envelope_rate > 0.0) env.rho = std::max(env.rho, s.envelope_rate);
    if (lambda <= env.rho * (1.0 + 1e-14)) {
      throw DivergenceError(
          "weighted_integral: sampled integrand growth matches or exceeds "
          "the weight decay");
    }
    double dist = truncation_distance(env, lambda, 0.5 * s.abs_tol, eps);
    // One consistency re-check: if the envelope underestimates |g| at the cut
    // (sub-exponential growth sampled too near the anchor), refit out there.
    const double cut0 = anchor + dir * dist;
    const double bound0 = env.C * std::exp(env.rho * dist);
    const double seen = std::abs(g(cut0));
    if (seen > bound0 * (1.0 + 1e-9)) {
      Envelope far = fit_envelope(g, cut0, dir, eps);
      far.C = std::max(far.C, seen);
      far.rho = std::max(far.rho, env.rho);
      if (lambda <= far.rho * (1.0 + 1e-14)) {
        throw DivergenceError(
            "weighted_integral: integrand growth at the truncation point "
            "matches or exceeds the weight decay");
      }
      dist += truncation_distance(far, lambda, 0.5 * s.abs_tol, eps);
    }
    const double cut = anchor + dir * dist;
    return lo_inf ? weighted_integral(g, cut, hi, rate, eps, s)
                  : weighted_integral(g, lo, cut, rate, eps, s);
  }

  // Finite case.  Shift the weight so its maximum over [lo, hi] is 1.
  const double t0 = rate >= 0.0 ? static_cast<double>(hi)
                                : static_cast<double>(lo);
  const auto shifted = [&](double t) {
    return g(t) * std::exp(rate * (t - t0) / eps);
  };
  const double value = adaptive_integral(shifted, lo, hi, s);
  const double scale = std::exp(rate * t0 / eps);
  return value * scale;
}

double find_root_monotone(const std::function<double(double)>& h, double lo,
                          double hi, double tol) {
  if (!(lo <= hi)) throw AccuracyError("find_root_monotone: empty bracket");
  double flo = h(lo);
  double fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw AccuracyError("find_root_monotone: no sign change on the bracket");
  }
  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    // Secant proposal, guarded to the strict interior; else bisect.
    double mid = 0.5 * (a + b);
    const double denom = fb - fa;
    if (denom != 0.0) {
      const double sec = a - fa * (b - a) / denom;
      const double pad = 0.125 * (b - a);
      if (sec > a + pad * 0.01 && sec < b - pad * 0.01) mid = sec;
    }
    if (!(mid > a && mid < b)) mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;  // bracket at round-off resolution
    const double fm = h(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

double convolve_force(const std::function<double(double)>& f3, ExtendedReal c,
                      double u, double eps, const QuadratureSettings& s_in) {
  const auto g = [&](double tau) { return f3(u + tau); };
  QuadratureSettings s = s_in;
  for (double& t : s.split_points) t -= u;  // kinks of f₃ in the τ variable
  if (!is_finite(c) && c > 0.0) {
    // Source at +∞: integrate rightward with decaying weight.
    return weighted_integral(g, 0.0, kPosInf, -1.0, eps, s);
  }
  if (!is_finite(c) && c < 0.0) {
    return weighted_integral(g, kNegInf, 0.0, +1.0, eps, s);
  }
  const double span = static_cast<double>(c) - u;
  if (span <= 0.0) {
    // u right of the source: ∫_{c−u}^0 f₃(u+τ)e^{τ/ε}dτ.
    return weighted_integral(g, span, 0.0, +1.0, eps, s);
  }
  return weighted_integral(g, 0.0, span, -1.0, eps, s);
}

}  // namespace bellman
