#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "loopoid/core.hpp"

// Central finite differences on coordinate charts.
namespace loopoid::numdiff {

inline double scaled_step(double h, double x) { return h * std::max(1.0, std::abs(x)); }

/// Jacobian of a vector map by central differences; column i uses a step
/// scaled by max(1, |x_i|).
template <typename Func>
Mat jacobian(const Func& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  Vec xp = x;
  Vec xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double hi = scaled_step(h, x[i]);
    xp[i] = x[i] + hi;
    xm[i] = x[i] - hi;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * hi);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return J;
}

template <typename Func>
Vec gradient(const Func& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec xp = x;
  Vec xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double hi = scaled_step(h, x[i]);
    xp[i] = x[i] + hi;
    xm[i] = x[i] - hi;
    g[i] = (f(xp) - f(xm)) / (2.0 * hi);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

/// d/dt f(x + t v) at t = 0. Works for scalar- and vector-valued f.
template <typename Func>
auto directional(const Func& f, const Vec& x, const Vec& v, double h) {
  using R = std::decay_t<decltype(f(x))>;
  if constexpr (std::is_arithmetic_v<R>) {
    return (f(x + h * v) - f(x - h * v)) / (2.0 * h);
  } else {
    return Vec((f(x + h * v) - f(x - h * v)) / (2.0 * h));
  }
}

/// d/dt f(c(t)) at t = 0 for a curve parameter.
template <typename Func>
auto along(const Func& f, double h) {
  using R = std::decay_t<decltype(f(0.0))>;
  if constexpr (std::is_arithmetic_v<R>) {
    return (f(h) - f(-h)) / (2.0 * h);
  } else {
    return Vec((f(h) - f(-h)) / (2.0 * h));
  }
}

/// Mixed partial d^2 f / dx_i dy_j at (x, y) by the 4-point stencil
/// (f(+h,+h) - f(+h,-h) - f(-h,+h) + f(-h,-h)) / (4 h^2).
template <typename Func>
Vec mixed_partial(const Func& f, const Vec& x, const Vec& y, Eigen::Index i, Eigen::Index j,
                  double h) {
  Vec xp = x, xm = x, yp = y, ym = y;
  xp[i] += h;
  xm[i] -= h;
  yp[j] += h;
  ym[j] -= h;
  return (f(xp, yp) - f(xp, ym) - f(xm, yp) + f(xm, ym)) / (4.0 * h * h);
}

/// Lie bracket [V, W](p) = DW(p) V(p) - DV(p) W(p) of two vector fields.
template <typename FieldV, typename FieldW>
Vec lie_bracket(const FieldV& V, const FieldW& W, const Vec& p, double h) {
  const Vec vp = V(p);
  const Vec wp = W(p);
  const Vec dw = (W(p + h * vp) - W(p - h * vp)) / (2.0 * h);
  const Vec dv = (V(p + h * wp) - V(p - h * wp)) / (2.0 * h);
  return dw - dv;
}

}  // namespace loopoid::numdiff
