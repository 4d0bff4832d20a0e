#include "loopoid/tangent_cotangent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

void require_composable(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h) {
  if (!composable(Q, g, h)) throw Error(ErrorCode::NotComposable, "tangent elements sit over a non-composable pair");
}

// v_h corrected so that T alpha(v_h) = T beta(v_g) exactly.
Vec matched_velocity(const ChartedQuasiloopoid& Q, const TangentElement& X, const TangentElement& Y, double tol) {
  if (Q.dim_m == 0) return Y.vector;
  const Vec vq = beta_jacobian(Q, X.base) * X.vector;
  const Mat Ja = alpha_jacobian(Q, Y.base);
  const Vec gap = vq - Ja * Y.vector;
  if (gap.norm() > tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "T beta(v_g) - T alpha(v_h) has norm %.3g", gap.norm());
    throw Error(ErrorCode::IncompatibleVelocities, buf);
  }
  return Y.vector + linalg::pinv(Ja) * gap;
}

}  // namespace

TangentElement tangent_multiply(const ChartedQuasiloopoid& Q, const TangentElement& X, const TangentElement& Y,
                                const TangentOptions& opts) {
  const Vec& g = X.base;
  const Vec& h = Y.base;
  require_composable(Q, g, h);
  const Vec vg = X.vector;
  const Vec vh = matched_velocity(Q, X, Y, opts.velocity_tol);
  const Vec q = Q.dim_m == 0 ? Vec(0) : Q.beta(g);
  const Vec vq = Q.dim_m == 0 ? Vec(0) : Vec(beta_jacobian(Q, g) * vg);

  LocalSection sigma;
  LocalSection tau;
  try {
    sigma = build_local_section(Q, Anchor::Beta, g, opts.slice);
    tau = build_local_section(Q, Anchor::Alpha, h, opts.slice);
  } catch (const Error& e) {
    throw Error(ErrorCode::SectionFailure, std::string("local section: ") + e.what());
  }
  const auto beta_or_empty = [&](const Vec& x) { return Q.dim_m == 0 ? Vec(0) : Q.beta(x); };
  const auto alpha_or_empty = [&](const Vec& x) { return Q.dim_m == 0 ? Vec(0) : Q.alpha(x); };
  const auto r_tau = [&](const Vec& x) { return Q.mul(x, tau.map(beta_or_empty(x))); };
  const auto l_sigma = [&](const Vec& y) { return Q.mul(sigma.map(alpha_or_empty(y)), y); };
  const auto both = [&](const Vec& p) { return Q.mul(sigma.map(p), tau.map(p)); };

  const double hg = numdiff::scaled_step(Q.fd_step, g.norm());
  const double hh = numdiff::scaled_step(Q.fd_step, h.norm());
  TangentElement out;
  out.base = Q.mul(g, h);
  try {
    out.vector = numdiff::directional(r_tau, g, vg, hg) + numdiff::directional(l_sigma, h, vh, hh);
    if (Q.dim_m > 0) out.vector -= numdiff::directional(both, q, vq, numdiff::scaled_step(Q.fd_step, q.norm()));
  } catch (const Error& e) {
    throw Error(ErrorCode::SectionFailure, std::string("section evaluation: ") + e.what());
  }
  return out;
}

TangentElement tangent_multiply_by_curves(const ChartedQuasiloopoid& Q, const TangentElement& X,
                                          const TangentElement& Y, double velocity_tol) {
  const Vec& g = X.base;
  const Vec& h = Y.base;
  require_composable(Q, g, h);
  const Vec vg = X.vector;
  const Vec vh = matched_velocity(Q, X, Y, velocity_tol);
  const auto gt = [&](double t) -> Vec { return g + t * vg; };
  const auto ht = [&](double t) -> Vec {
    const Vec y = h + t * vh;
    return Q.dim_m == 0 ? y : snap_to_fiber(Q, Anchor::Alpha, y, Q.beta(gt(t)));
  };
  TangentElement out;
  out.base = Q.mul(g, h);
  const double step = numdiff::scaled_step(Q.fd_step, std::max(g.norm(), h.norm()));
  out.vector = numdiff::along([&](double t) { return Q.mul(gt(t), ht(t)); }, step);
  return out;
}

TangentLoopoidReport check_tangent_loopoid(const ChartedQuasiloopoid& Q, int samples, CounterRng& rng, double tol) {
  TangentLoopoidReport rep;
  rep.samples = samples;
  rep.expected_rank = Q.rank();
  rep.min_left_rank = Q.rank();
  if (Q.inverse) rep.inverse_residual = 0.0;
  const auto bump = [](double& slot, double v) { slot = std::max(slot, v); };
  for (int s = 0; s < samples; ++s) {
    const Vec g = sample_element(Q, rng);
    const Vec h = sample_composable(Q, g, Anchor::Alpha, rng);
    TangentElement X{g, rng.uniform_vec(Q.dim_g, -1.0, 1.0)};
    TangentElement Y{h, rng.uniform_vec(Q.dim_g, -1.0, 1.0)};
    if (Q.dim_m > 0) {
      const Mat Ja = alpha_jacobian(Q, h);
      Y.vector += linalg::pinv(Ja) * (beta_jacobian(Q, g) * X.vector - Ja * Y.vector);
    }
    const TangentElement XY = tangent_multiply(Q, X, Y);

    if (Q.dim_m > 0) {
      const Vec gh = XY.base;
      bump(rep.anchor_residual, (alpha_jacobian(Q, gh) * XY.vector - alpha_jacobian(Q, g) * X.vector).norm());
      bump(rep.anchor_residual, (beta_jacobian(Q, gh) * XY.vector - beta_jacobian(Q, h) * Y.vector).norm());
    }

    {
      const Vec a = Q.dim_m == 0 ? Vec(0) : Q.alpha(g);
      const Vec b = Q.dim_m == 0 ? Vec(0) : Q.beta(g);
      const TangentElement left_unit{Q.unit(a), Vec(unit_jacobian(Q, a) * (alpha_jacobian(Q, g) * X.vector))};
      const TangentElement right_unit{Q.unit(b), Vec(unit_jacobian(Q, b) * (beta_jacobian(Q, g) * X.vector))};
      const TangentElement l = tangent_multiply(Q, left_unit, X);
      const TangentElement r = tangent_multiply(Q, X, right_unit);
      bump(rep.unit_residual, std::max({(l.base - g).norm(), (l.vector - X.vector).norm(), (r.base - g).norm(),
                                        (r.vector - X.vector).norm()}));
    }

    {
      TangentOptions alt;
      alt.slice = SliceKind::UnitTangent;
      bump(rep.section_independence, (tangent_multiply(Q, X, Y, alt).vector - XY.vector).norm());
      bump(rep.curve_agreement, (tangent_multiply_by_curves(Q, X, Y).vector - XY.vector).norm());
    }

    {
      const Mat K = linalg::null_space(alpha_jacobian(Q, h));
      Mat images(Q.dim_g, K.cols());
      for (Eigen::Index c = 0; c < K.cols(); ++c) {
        const TangentElement Yc{h, Vec(Y.vector + K.col(c))};
        images.col(c) = tangent_multiply(Q, X, Yc).vector - XY.vector;
      }
      rep.min_left_rank = std::min(rep.min_left_rank, linalg::numerical_rank(images, 1e-7));
    }

    if (Q.inverse) {
      const double hg = numdiff::scaled_step(Q.fd_step, g.norm());
      const TangentElement Xi{Q.inverse(g), numdiff::directional(Q.inverse, g, X.vector, hg)};
      const TangentElement back = tangent_multiply(Q, Xi, XY);
      bump(*rep.inverse_residual, std::max((back.base - h).norm(), (back.vector - Y.vector).norm()));
    }
  }
  rep.ok = rep.anchor_residual < tol && rep.unit_residual < tol && rep.section_independence < tol &&
           rep.curve_agreement < tol && rep.min_left_rank == rep.expected_rank &&
           (!rep.inverse_residual || *rep.inverse_residual < tol);
  return rep;
}

Vec cotangent_fibration(const FrameField& F, Anchor side, const CovectorElement& mu) {
  const int r = F.loopoid().rank();
  Vec out(r);
  const Side s = side == Anchor::Beta ? Side::Left : Side::Right;
  for (int i = 0; i < r; ++i) out[i] = mu.covector.dot(prolong(F, Vec::Unit(r, i), s, mu.base));
  return out;
}

Vec cotangent_fibration(const ChartedQuasiloopoid& Q, Anchor side, const CovectorElement& mu) {
  const Vec u = Q.dim_m == 0 ? Vec(0) : (side == Anchor::Beta ? Q.beta(mu.base) : Q.alpha(mu.base));
  return cotangent_fibration(FrameField(Q, u), side, mu);
}

}  // namespace loopoid
