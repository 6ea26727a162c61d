// SPDX-License-Identifier: MIT
#include "bellman/tangents.hpp"

#include <cmath>
#include <utility>

#include "bellman/errors.hpp"
#include "bellman/numerics.hpp"

namespace bellman {

namespace {

/// Mean of f″ over [a0, b0], taken from f′ to avoid cancellation.
double mean_f2(const BoundaryFunction& f, double a0, double b0) {
  return (f.f1(b0) - f.f1(a0)) / (b0 - a0);
}

/// ε⁻¹∫ g(u+τ)e^{−|τ|/ε}dτ over the one-sided range that reaches `u` from
/// the anchor (τ ≤ 0 for the Right family, τ ≥ 0 for the Left), where
/// `span` is the signed anchor offset (−∞/+∞ for the infinity anchors).
double weighted_from(const std::function<double(double)>& g, double span,
                     Side side, double eps, const QuadratureSettings& s,
                     double u) {
  const auto shifted = [&](double tau) { return g(u + tau); };
  QuadratureSettings st = s;
  for (double& t : st.split_points) t -= u;  // kinks of g in the τ variable
  if (side == Side::Right) {
    return weighted_integral(shifted, span, 0.0, +1.0, eps, st) / eps;
  }
  return weighted_integral(shifted, 0.0, span, -1.0, eps, st) / eps;
}

}  // namespace

double m_value_direct(Side side, const Anchor& anchor,
                      const BoundaryFunction& f, double eps, double u) {
  const QuadratureSettings s = f.quadrature();
  switch (anchor.kind) {
    case AnchorKind::FromInfinity: {
      const double span = side == Side::Right ? kNegInf : kPosInf;
      return weighted_from(f.f1, span, side, eps, s, u);
    }
    case AnchorKind::FreeConstant: {
      const double span = side == Side::Right ? kNegInf : kPosInf;
      const double base = weighted_from(f.f1, span, side, eps, s, u);
      const double arg =
          side == Side::Right ? (anchor.at - u) / eps : (u - anchor.at) / eps;
      return base + anchor.amplitude * std::exp(arg);
    }
    case AnchorKind::ScreenEnd: {
      const double mean = mean_f2(f, anchor.a0, anchor.b0);
      if (side == Side::Right) {
        const double M = f.f1(anchor.b0) - eps * mean;
        const double span = anchor.b0 - u;  // ≤ 0 on the anchored side
        return M * std::exp(span / eps) +
               weighted_from(f.f1, span, side, eps, s, u);
      }
      const double M = f.f1(anchor.a0) + eps * mean;
      const double span = anchor.a0 - u;  // ≥ 0 on the anchored side
      return M * std::exp(-span / eps) +
             weighted_from(f.f1, span, side, eps, s, u);
    }
  }
  throw AccuracyError("m_value_direct: unreachable anchor kind");
}

double m_second_direct(Side side, const Anchor& anchor,
                       const BoundaryFunction& f, double eps, double u) {
  const QuadratureSettings s = f.quadrature();
  switch (anchor.kind) {
    case AnchorKind::FromInfinity: {
      const double span = side == Side::Right ? kNegInf : kPosInf;
      return weighted_from(f.f3, span, side, eps, s, u);
    }
    case AnchorKind::FreeConstant: {
      const double span = side == Side::Right ? kNegInf : kPosInf;
      const double base = weighted_from(f.f3, span, side, eps, s, u);
      const double arg =
          side == Side::Right ? (anchor.at - u) / eps : (u - anchor.at) / eps;
      return base + anchor.amplitude / (eps * eps) * std::exp(arg);
    }
    case AnchorKind::ScreenEnd: {
      const double mean = mean_f2(f, anchor.a0, anchor.b0);
      if (side == Side::Right) {
        const double defect = f.f2(anchor.b0) - mean;  // D_R
        const double span = anchor.b0 - u;
        return defect / eps * std::exp(span / eps) +
               weighted_from(f.f3, span, side, eps, s, u);
      }
      const double defect = f.f2(anchor.a0) - mean;  // D_L
      const double span = anchor.a0 - u;
      return -defect / eps * std::exp(-span / eps) +
             weighted_from(f.f3, span, side, eps, s, u);
    }
  }
  throw AccuracyError("m_second_direct: unreachable anchor kind");
}

// ==== TangentCoefficient =====================================================

TangentCoefficient::TangentCoefficient(Side side, Anchor anchor,
                                       BoundaryFunction f, double eps)
    : side_(side), anchor_(std::move(anchor)), f_(std::move(f)), eps_(eps) {
  if (!(eps > 0.0)) throw ConstructionError("TangentCoefficient: eps ≤ 0");
}

void TangentCoefficient::prime(double lo, double hi) {
  if (!(lo < hi)) return;
  const double step = 0.5 * eps_;
  const std::size_t count = static_cast<std::size_t>((hi - lo) / step) + 2;
  grid_u_.assign(count, 0.0);
  grid_m_.assign(count, 0.0);
  grid_m2_.assign(count, 0.0);
  // Seed at the anchored end and march in the stable (decaying) direction:
  // rightward for the Right family, leftward for the Left family.
  const QuadratureSettings s = f_.quadrature();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = side_ == Side::Right ? i : count - 1 - i;
    grid_u_[k] = lo + step * static_cast<double>(k);
    const double u = grid_u_[k];
    if (i == 0) {
      grid_m_[k] = m_value_direct(side_, anchor_, f_, eps_, u);
      grid_m2_[k] = m_second_direct(side_, anchor_, f_, eps_, u);
      continue;
    }
    const std::size_t prev = side_ == Side::Right ? k - 1 : k + 1;
    const double span = grid_u_[prev] - u;  // ∓ step, on the decaying side
    const double damp = std::exp(side_ == Side::Right ? span / eps_
                                                      : -span / eps_);
    const auto g1 = [&](double tau) { return f_.f1(u + tau); };
    const auto g3 = [&](double tau) { return f_.f3(u + tau); };
    if (side_ == Side::Right) {
      grid_m_[k] = grid_m_[prev] * damp +
                   weighted_integral(g1, span, 0.0, +1.0, eps_, s) / eps_;
      grid_m2_[k] = grid_m2_[prev] * damp +
                    weighted_integral(g3, span, 0.0, +1.0, eps_, s) / eps_;
    } else {
      grid_m_[k] = grid_m_[prev] * damp +
                   weighted_integral(g1, 0.0, span, -1.0, eps_, s) / eps_;
      grid_m2_[k] = grid_m2_[prev] * damp +
                    weighted_integral(g3, 0.0, span, -1.0, eps_, s) / eps_;
    }
  }
}

std::size_t TangentCoefficient::checkpoint_for(double u) const {
  if (grid_u_.empty()) return static_cast<std::size_t>(-1);
  if (side_ == Side::Right) {
    // Largest checkpoint ≤ u.
    if (u < grid_u_.front()) return static_cast<std::size_t>(-1);
    const double step = grid_u_[1] - grid_u_[0];
    std::size_t k = static_cast<std::size_t>((u - grid_u_.front()) / step);
    if (k >= grid_u_.size()) k = grid_u_.size() - 1;
    return k;
  }
  if (u > grid_u_.back()) return static_cast<std::size_t>(-1);
  const double step = grid_u_[1] - grid_u_[0];
  const double offset = (u - grid_u_.front()) / step;
  std::size_t k = static_cast<std::size_t>(std::ceil(offset));
  if (offset < 0.0) k = 0;
  if (k >= grid_u_.size()) k = grid_u_.size() - 1;
  return k;
}

double TangentCoefficient::m_value(double u) const {
  const std::size_t k = checkpoint_for(u);
  if (k == static_cast<std::size_t>(-1)) {
    return m_value_direct(side_, anchor_, f_, eps_, u);
  }
  const double span = grid_u_[k] - u;
  const QuadratureSettings s = f_.quadrature();
  const auto g1 = [&](double tau) { return f_.f1(u + tau); };
  if (side_ == Side::Right) {
    return grid_m_[k] * std::exp(span / eps_) +
           weighted_integral(g1, span, 0.0, +1.0, eps_, s) / eps_;
  }
  return grid_m_[k] * std::exp(-span / eps_) +
         weighted_integral(g1, 0.0, span, -1.0, eps_, s) / eps_;
}

double TangentCoefficient::m_second(double u) const {
  const std::size_t k = checkpoint_for(u);
  if (k == static_cast<std::size_t>(-1)) {
    return m_second_direct(side_, anchor_, f_, eps_, u);
  }
  const double span = grid_u_[k] - u;
  const QuadratureSettings s = f_.quadrature();
  const auto g3 = [&](double tau) { return f_.f3(u + tau); };
  if (side_ == Side::Right) {
    return grid_m2_[k] * std::exp(span / eps_) +
           weighted_integral(g3, span, 0.0, +1.0, eps_, s) / eps_;
  }
  return grid_m2_[k] * std::exp(-span / eps_) +
         weighted_integral(g3, 0.0, span, -1.0, eps_, s) / eps_;
}

double TangentCoefficient::m_derivative(double u) const {
  const double m = m_value(u);
  return side_ == Side::Right ? (f_.f1(u) - m) / eps_ : (m - f_.f1(u)) / eps_;
}

double eval_tangent(const TangentCoefficient& coeff, const BoundaryFunction& f,
                    Point x) {
  const double u = u_tangent(x, coeff.side(), coeff.eps());
  return coeff.m_value(u) * (x.x1 - u) + f.f(u);
}

}  // namespace bellman
