#include "loopoid/lie_functor.hpp"

#include <algorithm>
#include <cmath>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

// Outer step for brackets of prolonged fields; the fields themselves use Q.fd_step.
constexpr double kOuterStep = 1e-4;

Vec basis(int r, int i) { return Vec::Unit(r, i); }

}  // namespace

FrameField::FrameField(const ChartedQuasiloopoid& Q, const Vec& reference_u) : Q_(Q) {
  const Vec p = Q.unit(reference_u);
  const Mat N = linalg::null_space(alpha_jacobian(Q, p));
  if (N.cols() != Q.rank()) throw Error(ErrorCode::RankDeficient, "alpha is not a submersion at the reference unit");
  pivots_ = linalg::pivot_rows(N);
}

AlgebroidFrame FrameField::at(const Vec& u) const {
  const ChartedQuasiloopoid& Q = Q_;
  const Vec p = Q.unit(u);
  const Mat Ja = alpha_jacobian(Q, p);
  const Mat Jb = beta_jacobian(Q, p);
  const Mat Je = unit_jacobian(Q, u);
  if (linalg::numerical_rank(Ja) < Q.dim_m || linalg::numerical_rank(Jb) < Q.dim_m)
    throw Error(ErrorCode::RankDeficient, "anchor maps are not submersions at the unit");
  const Mat N = linalg::null_space(Ja);
  if (N.cols() != Q.rank()) throw Error(ErrorCode::RankDeficient, "alpha-vertical space has the wrong dimension");
  Mat P(Q.rank(), Q.rank());
  for (int i = 0; i < Q.rank(); ++i) P.row(i) = N.row(pivots_[static_cast<std::size_t>(i)]);
  if (Q.rank() > 0 && linalg::min_singular_value(P) < 1e-8)
    throw Error(ErrorCode::RankDeficient, "frame pivots degenerate away from the reference point");

  AlgebroidFrame F;
  F.u = u;
  F.rank = Q.rank();
  F.alpha_vertical = linalg::normalize_on_pivots(N, pivots_);
  F.tm_basis = Je;
  F.beta_vertical = F.alpha_vertical - Je * (Jb * F.alpha_vertical);
  F.anchor_left = Jb * F.alpha_vertical;
  F.anchor_right = Ja * F.beta_vertical;
  return F;
}

AlgebroidFrame algebroid_frame(const ChartedQuasiloopoid& Q, const Vec& u) { return FrameField(Q, u).at(u); }

Vec prolong(const FrameField& F, const Vec& X, Side side, const Vec& g) {
  return prolong_section(F, constant_section(X), side, g);
}

Vec prolong_section(const FrameField& F, const AGSection& X, Side side, const Vec& g) {
  const ChartedQuasiloopoid& Q = F.loopoid();
  const Vec u = side == Side::Left ? Q.beta(g) : Q.alpha(g);
  const AlgebroidFrame fr = F.at(u);
  const Vec coeffs = X(u);
  const Vec base = Q.unit(u);
  const double h = numdiff::scaled_step(Q.fd_step, base.norm());
  if (side == Side::Left) {
    const Vec v = fr.alpha_vertical * coeffs;
    const auto curve = [&](double t) { return snap_to_fiber(Q, Anchor::Alpha, base + t * v, u); };
    return numdiff::along([&](double t) { return Q.mul(g, curve(t)); }, h);
  }
  const Vec v = fr.beta_vertical * coeffs;
  const auto curve = [&](double t) { return snap_to_fiber(Q, Anchor::Beta, base + t * v, u); };
  return numdiff::along([&](double t) { return Q.mul(curve(t), g); }, h);
}

BracketResult algebroid_bracket(const FrameField& F, Side side, const AGSection& X, const AGSection& Y,
                                const Vec& u) {
  const ChartedQuasiloopoid& Q = F.loopoid();
  const Vec p = Q.unit(u);
  const auto V = [&](const Vec& g) { return prolong_section(F, X, side, g); };
  const auto W = [&](const Vec& g) { return prolong_section(F, Y, side, g); };
  BracketResult out;
  out.raw = numdiff::lie_bracket(V, W, p, numdiff::scaled_step(kOuterStep, p.norm()));
  const AlgebroidFrame fr = F.at(u);
  Mat B(Q.dim_g, Q.dim_g);
  B << (side == Side::Left ? fr.alpha_vertical : fr.beta_vertical), fr.tm_basis;
  if (linalg::min_singular_value(B) < 1e-10)
    throw Error(ErrorCode::FrameSingular, "vertical and unit tangent bases do not span TG at the unit");
  const Vec sol = B.fullPivLu().solve(out.raw);
  out.value = sol.head(Q.rank());
  out.tm_component = sol.tail(Q.dim_m);
  return out;
}

BracketResult algebroid_bracket(const ChartedQuasiloopoid& Q, Side side, const Vec& X, const Vec& Y,
                                const Vec& u) {
  return algebroid_bracket(FrameField(Q, u), side, constant_section(X), constant_section(Y), u);
}

StructureTensor bracket_table(const FrameField& F, Side side, const Vec& u) {
  const int r = F.loopoid().rank();
  StructureTensor C = zero_structure(r);
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const Vec v =
          algebroid_bracket(F, side, constant_section(basis(r, i)), constant_section(basis(r, j)), u).value;
      for (int k = 0; k < r; ++k) {
        C[static_cast<std::size_t>(k)](i, j) = v[k];
        C[static_cast<std::size_t>(k)](j, i) = -v[k];
      }
    }
  }
  return C;
}

StructureTensor bracket_table(const ChartedQuasiloopoid& Q, Side side, const Vec& u) {
  return bracket_table(FrameField(Q, u), side, u);
}

Vec anchor(const AlgebroidFrame& frame, const Vec& X, Side side) {
  return side == Side::Left ? Vec(frame.anchor_left * X) : Vec(frame.anchor_right * X);
}

SkewAlgebroidChart loopoid_algebroid(const ChartedQuasiloopoid& Q, Side side, const Vec& reference_u) {
  const FrameField F(Q, reference_u);
  SkewAlgebroidChart A;
  A.base_dim = Q.dim_m;
  A.rank = Q.rank();
  A.fd_step = Q.fd_step;
  A.structure = [F, side](const Vec& u) { return bracket_table(F, side, u); };
  A.anchor = [F, side](const Vec& u) -> Mat {
    const AlgebroidFrame fr = F.at(u);
    return side == Side::Left ? fr.anchor_left : fr.anchor_right;
  };
  A.name = Q.name + (side == Side::Left ? ":left" : ":right");
  return A;
}

AlmostLieReport check_almost_lie(const ChartedQuasiloopoid& Q, Side side, const Vec& u0, int samples,
                                 CounterRng& rng, double radius, double tol) {
  const SkewAlgebroidChart A = loopoid_algebroid(Q, side, u0);
  AlmostLieReport rep;
  rep.samples = samples;
  rep.tol = tol;
  for (int s = 0; s < samples; ++s) {
    const Vec u = u0 + rng.uniform_vec(Q.dim_m, -radius, radius);
    rep.residual = std::max(rep.residual, almost_lie_residual_at(A, u));
  }
  rep.almost_lie = rep.residual < tol;
  return rep;
}

double inverse_tangent_residual(const ChartedQuasiloopoid& Q, const Vec& u) {
  if (!Q.inverse) throw Error(ErrorCode::UsageError, "inverse_tangent_residual needs an inverse map");
  const AlgebroidFrame fr = algebroid_frame(Q, u);
  const Vec p = Q.unit(u);
  const double h = numdiff::scaled_step(Q.fd_step, p.norm());
  double worst = 0.0;
  for (int i = 0; i < fr.rank; ++i) {
    const Vec t = numdiff::directional(Q.inverse, p, Vec(fr.alpha_vertical.col(i)), h);
    worst = std::max(worst, (t + fr.beta_vertical.col(i)).norm());
  }
  return worst;
}

SignReport bracket_sign_residuals(const ChartedQuasiloopoid& Q, const Vec& u0, int samples, CounterRng& rng,
                                  double radius) {
  SignReport rep;
  rep.has_inverse = static_cast<bool>(Q.inverse);
  const FrameField F(Q, u0);
  const int r = Q.rank();
  for (int s = 0; s < samples; ++s) {
    const Vec u = u0 + rng.uniform_vec(Q.dim_m, -radius, radius);
    const StructureTensor Cl = bracket_table(F, Side::Left, u);
    const StructureTensor Cr = bracket_table(F, Side::Right, u);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        Vec sum(r);
        for (int k = 0; k < r; ++k)
          sum[k] = Cl[static_cast<std::size_t>(k)](i, j) + Cr[static_cast<std::size_t>(k)](i, j);
        rep.bracket_sum = std::max(rep.bracket_sum, sum.norm());
      }
    }
    const AlgebroidFrame fr = F.at(u);
    if (r > 0)
      rep.anchor_opposition =
          std::max(rep.anchor_opposition, (fr.anchor_left + fr.anchor_right).cwiseAbs().maxCoeff());
    if (Q.inverse) {
      const Vec p = Q.unit(u);
      const double h = numdiff::scaled_step(Q.fd_step, p.norm());
      for (int i = 0; i < r; ++i) {
        const Vec t = numdiff::directional(Q.inverse, p, Vec(fr.alpha_vertical.col(i)), h);
        rep.inverse_tangent = std::max(rep.inverse_tangent, (t + fr.beta_vertical.col(i)).norm());
      }
    }
  }
  return rep;
}

double loop_cross_bracket_residual(const SmoothLoopChart& L) {
  const ChartedQuasiloopoid Q = loop_as_loopoid(L);
  const FrameField F(Q, Vec(0));
  const int n = L.dim();
  const Vec& e = L.unit();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto V = [&](const Vec& g) { return prolong(F, basis(n, i), Side::Left, g); };
      const auto W = [&](const Vec& g) { return prolong(F, basis(n, j), Side::Right, g); };
      worst = std::max(worst, numdiff::lie_bracket(V, W, e, numdiff::scaled_step(kOuterStep, e.norm())).norm());
    }
  }
  return worst;
}

ContrastMetric contrast_metric(const ChartedQuasiloopoid& Q, const ScalarField& Fs, const Vec& u) {
  ContrastMetric out;
  // First jet along M: value and differential at u and at axis offsets.
  std::vector<Vec> probes{u};
  for (int i = 0; i < Q.dim_m; ++i) {
    probes.push_back(u + 0.1 * Vec::Unit(Q.dim_m, i));
    probes.push_back(u - 0.1 * Vec::Unit(Q.dim_m, i));
  }
  for (const Vec& q : probes) {
    const Vec p = Q.unit(q);
    out.jet_residual = std::max({out.jet_residual, std::abs(Fs(p)), Fs.gradient(p).norm()});
  }
  if (out.jet_residual > 1e-7) throw Error(ErrorCode::JetNotVanishing, "F or dF does not vanish along M");

  const FrameField F(Q, u);
  const int r = Q.rank();
  const Vec p = Q.unit(u);
  const double h = numdiff::scaled_step(kOuterStep, p.norm());
  Mat g(r, r);
  for (int j = 0; j < r; ++j) {
    const auto Gj = [&](const Vec& x) { return Fs.gradient(x).dot(prolong(F, basis(r, j), Side::Left, x)); };
    for (int i = 0; i < r; ++i) {
      const Vec v = prolong(F, basis(r, i), Side::Left, p);
      g(i, j) = numdiff::directional(Gj, p, v, h);
    }
  }
  out.asymmetry = r > 0 ? (g - g.transpose()).cwiseAbs().maxCoeff() : 0.0;
  out.g = 0.5 * (g + g.transpose());
  return out;
}

}  // namespace loopoid
