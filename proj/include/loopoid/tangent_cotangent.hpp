#pragma once

#include "loopoid/core.hpp"
#include "loopoid/lie_functor.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/random.hpp"

namespace loopoid {

struct TangentElement {
  Vec base;
  Vec vector;
};

struct CovectorElement {
  Vec base;
  Vec covector;
};

struct TangentOptions {
  double velocity_tol = 1e-7;
  SliceKind slice = SliceKind::Pseudoinverse;
};

/// T m(v_g, v_h) = T r_tau(v_g) + T l_sigma(v_h) - T (l_sigma o r_tau)(v_q) with
/// sigma a beta-section through g and tau an alpha-section through h.
/// Throws NotComposable, IncompatibleVelocities, SectionFailure.
TangentElement tangent_multiply(const ChartedQuasiloopoid& Q, const TangentElement& X, const TangentElement& Y,
                                const TangentOptions& opts = {});

/// The same product from curves g(t), h(t) kept composable by projecting h(t)
/// onto the alpha-fiber over beta(g(t)).
TangentElement tangent_multiply_by_curves(const ChartedQuasiloopoid& Q, const TangentElement& X,
                                          const TangentElement& Y, double velocity_tol = 1e-7);

struct TangentLoopoidReport {
  int samples = 0;
  double anchor_residual = 0.0;        // T alpha(X Y) - T alpha(X), T beta(X Y) - T beta(Y)
  double unit_residual = 0.0;          // (eps(alpha g), T eps T alpha v) X = X and right analog
  double section_independence = 0.0;  // pseudoinverse vs unit-tangent slices
  double curve_agreement = 0.0;        // bisection formula vs curves
  int min_left_rank = 0;               // rank of v_h -> X Y on ker T alpha(h)
  int expected_rank = 0;
  std::optional<double> inverse_residual;  // (T iota X)((X Y)) - Y
  bool ok = false;
};

TangentLoopoidReport check_tangent_loopoid(const ChartedQuasiloopoid& Q, int samples, CounterRng& rng,
                                           double tol = 1e-6);

/// beta-tilde(mu_g)_i = <mu_g, left X_i(g)> (side Beta, frame at beta(g));
/// alpha-tilde(nu_h)_i = <nu_h, right X_i(h)> (side Alpha, frame at alpha(h)).
Vec cotangent_fibration(const ChartedQuasiloopoid& Q, Anchor side, const CovectorElement& mu);
Vec cotangent_fibration(const FrameField& F, Anchor side, const CovectorElement& mu);

}  // namespace loopoid
