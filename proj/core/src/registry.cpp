// SPDX-License-Identifier: MIT
#include "bellman/registry.hpp"

#include <cmath>

#include "bellman/errors.hpp"

namespace bellman {

namespace {

double require_param(const std::map<std::string, double>& params,
                     const std::string& key, const std::string& fn) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ConfigError("make_builtin: \"" + fn + "\" needs parameter \"" + key +
                      "\"");
  }
  return it->second;
}

}  // namespace

BoundaryFunction make_exponential(int sign) {
  if (sign != 1 && sign != -1) throw ConfigError("make_exponential: sign ∉ {±1}");
  BoundaryFunction f;
  const double s = sign;
  f.name = sign > 0 ? "exp+" : "exp-";
  f.f = [s](double t) { return std::exp(s * t); };
  f.f1 = [s](double t) { return s * std::exp(s * t); };
  f.f2 = [s](double t) { return std::exp(s * t); };
  f.f3 = [s](double t) { return s * std::exp(s * t); };
  f.eps0 = 1.0;
  f.pattern.c_points = {sign > 0 ? kPosInf : kNegInf};
  return f;
}

BoundaryFunction make_cubic(int sign) {
  if (sign != 1 && sign != -1) throw ConfigError("make_cubic: sign ∉ {±1}");
  BoundaryFunction f;
  const double s = sign;
  f.name = sign > 0 ? "cubic+" : "cubic-";
  f.f = [s](double t) { return s * t * t * t; };
  f.f1 = [s](double t) { return 3.0 * s * t * t; };
  f.f2 = [s](double t) { return 6.0 * s * t; };
  f.f3 = [s](double) { return 6.0 * s; };
  f.pattern.c_points = {sign > 0 ? kPosInf : kNegInf};
  return f;
}

BoundaryFunction make_power(double p) {
  if (!(p > 2.0)) throw ClassGateError("make_power: requires p > 2");
  BoundaryFunction f;
  f.name = "power";
  f.f = [p](double t) { return std::pow(std::abs(t), p); };
  f.f1 = [p](double t) {
    return t == 0.0 ? 0.0
                    : p * std::pow(std::abs(t), p - 1.0) * (t > 0 ? 1.0 : -1.0);
  };
  f.f2 = [p](double t) { return p * (p - 1.0) * std::pow(std::abs(t), p - 2.0); };
  f.f3 = [p](double t) {
    return t == 0.0 ? 0.0
                    : p * (p - 1.0) * (p - 2.0) *
                          std::pow(std::abs(t), p - 3.0) * (t > 0 ? 1.0 : -1.0);
  };
  f.pattern.c_points = {kNegInf, kPosInf};
  f.pattern.v_points = {0.0};
  f.kinks = {0.0};
  return f;
}

BoundaryFunction make_quartic_plus(double a) {
  BoundaryFunction f;
  f.name = "quartic+";
  f.f = [a](double t) { return t * t * t * t / 24.0 - a * t * t * t / 6.0; };
  f.f1 = [a](double t) { return t * t * t / 6.0 - a * t * t / 2.0; };
  f.f2 = [a](double t) { return t * t / 2.0 - a * t; };
  f.f3 = [a](double t) { return t - a; };
  f.pattern.c_points = {kNegInf, kPosInf};
  f.pattern.v_points = {a};
  return f;
}

BoundaryFunction make_quartic_minus(double c) {
  BoundaryFunction f;
  f.name = "quartic-";
  f.f = [c](double t) {
    const double r = t - c;
    return -r * r * r * r;
  };
  f.f1 = [c](double t) {
    const double r = t - c;
    return -4.0 * r * r * r;
  };
  f.f2 = [c](double t) {
    const double r = t - c;
    return -12.0 * r * r;
  };
  f.f3 = [c](double t) { return -24.0 * (t - c); };
  f.pattern.c_points = {c};
  return f;
}

BoundaryFunction make_quintic(double d) {
  if (!(d > 0.0)) throw ClassGateError("make_quintic: requires d > 0");
  BoundaryFunction f;
  f.name = "quintic";
  f.f = [d](double t) { return t * t * t * t * t / 60.0 - d * t * t * t / 6.0; };
  f.f1 = [d](double t) { return t * t * t * t / 12.0 - d * t * t / 2.0; };
  f.f2 = [d](double t) { return t * t * t / 3.0 - d * t; };
  f.f3 = [d](double t) { return t * t - d; };
  const double r = std::sqrt(d);
  f.pattern.c_points = {-r, kPosInf};
  f.pattern.v_points = {r};
  return f;
}

BoundaryFunction make_two_exp(double alpha) {
  if (!(alpha > 0.0)) throw ClassGateError("make_two_exp: requires alpha > 0");
  BoundaryFunction f;
  const double a = alpha;
  f.name = "two-exp";
  f.f = [a](double t) {
    if (t >= 0.0) return std::exp(t);
    return -a * a * a * std::exp(t / a) + t * t * (1.0 + a) / 2.0 +
           t * (1.0 + a * a) + 1.0 + a * a * a;
  };
  f.f1 = [a](double t) {
    if (t >= 0.0) return std::exp(t);
    return -a * a * std::exp(t / a) + t * (1.0 + a) + 1.0 + a * a;
  };
  f.f2 = [a](double t) {
    if (t >= 0.0) return std::exp(t);
    return -a * std::exp(t / a) + 1.0 + a;
  };
  f.f3 = [a](double t) {
    if (t >= 0.0) return std::exp(t);
    return -std::exp(t / a);
  };
  f.eps0 = 1.0;
  f.pattern.c_points = {kNegInf, kPosInf};
  f.pattern.v_points = {0.0};
  f.kinks = {0.0};
  return f;
}

BoundaryFunction make_example6() {
  // Third derivative −t² on t ≤ 0, t on t > 0; integrate three times from 0.
  const PiecewisePoly f3({0.0}, {{0.0, 0.0, -1.0}, {0.0, 1.0}});
  BoundaryFunction f = make_piecewise(f3, 0.0, 0.0, 0.0, kPosInf);
  f.name = "example6";
  return f;
}

BoundaryFunction make_piecewise(const PiecewisePoly& f3, double f0,
                                double f1_at_0, double f2_at_0, double eps0) {
  if (!(eps0 > 0.0)) throw ConfigError("make_piecewise: eps0 must be > 0");
  const PiecewisePoly d2 = f3.antiderivative(0.0, f2_at_0);
  const PiecewisePoly d1 = d2.antiderivative(0.0, f1_at_0);
  const PiecewisePoly d0 = d1.antiderivative(0.0, f0);
  BoundaryFunction f;
  f.name = "piecewise";
  f.f = [d0](double t) { return d0(t); };
  f.f1 = [d1](double t) { return d1(t); };
  f.f2 = [d2](double t) { return d2(t); };
  f.f3 = [f3](double t) { return f3(t); };
  f.eps0 = eps0;
  f.kinks = f3.breakpoints();
  // Scan a window padding the breakpoint span (polynomial tails keep their
  // sign outside it).
  double lo = -1.0, hi = 1.0;
  if (!f3.breakpoints().empty()) {
    const double span_lo = f3.breakpoints().front();
    const double span_hi = f3.breakpoints().back();
    const double pad = 2.0 + (span_hi - span_lo);
    lo = span_lo - pad;
    hi = span_hi + pad;
  }
  f.pattern = detect_pattern(f.f3, lo, hi);
  return f;
}

BoundaryFunction make_builtin(const std::string& name,
                              const std::map<std::string, double>& params) {
  if (name == "exp+") return make_exponential(+1);
  if (name == "exp-") return make_exponential(-1);
  if (name == "cubic+") return make_cubic(+1);
  if (name == "cubic-") return make_cubic(-1);
  if (name == "power") return make_power(require_param(params, "p", name));
  if (name == "quartic+") {
    return make_quartic_plus(require_param(params, "a", name));
  }
  if (name == "quartic-") {
    return make_quartic_minus(require_param(params, "c", name));
  }
  if (name == "quintic") return make_quintic(require_param(params, "d", name));
  if (name == "two-exp") {
    return make_two_exp(require_param(params, "alpha", name));
  }
  if (name == "example6") return make_example6();
  throw ConfigError("make_builtin: unknown function \"" + name + "\"");
}

std::vector<std::string> builtin_names() {
  return {"exp+",     "exp-",     "cubic+",  "cubic-",  "power",
          "quartic+", "quartic-", "quintic", "two-exp", "example6"};
}

}  // namespace bellman
