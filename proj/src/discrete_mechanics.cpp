#include "loopoid/discrete_mechanics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"
#include "loopoid/random.hpp"
#include "loopoid/tangent_cotangent.hpp"

namespace loopoid {

namespace {

constexpr double kOuterStep = 1e-4;

Vec beta_of(const ChartedQuasiloopoid& Q, const Vec& g) { return Q.dim_m == 0 ? Vec(0) : Q.beta(g); }
Vec alpha_of(const ChartedQuasiloopoid& Q, const Vec& g) { return Q.dim_m == 0 ? Vec(0) : Q.alpha(g); }

FrameField frame_at(const DiscreteLagrangianSystem& S, const Vec& u) {
  ChartedQuasiloopoid Q = S.loopoid;
  Q.fd_step = S.fd_step;
  return FrameField(Q, u);
}

// DL(g, h) from dL paired with prolonged fields.
Vec dl(const FrameField& F, const DiscreteLagrangianSystem& S, const Vec& g, const Vec& h) {
  return cotangent_fibration(F, Anchor::Beta, {g, S.L.gradient(g)}) -
         cotangent_fibration(F, Anchor::Alpha, {h, S.L.gradient(h)});
}

Vec system_residual(const FrameField& F, const DiscreteLagrangianSystem& S, const Vec& g, const Vec& h) {
  const Vec c = alpha_of(S.loopoid, h) - beta_of(S.loopoid, g);
  const Vec d = dl(F, S, g, h);
  Vec r(c.size() + d.size());
  r << c, d;
  return r;
}

Mat fiber_directions(const Mat& J, const std::vector<int>& pivots) {
  const Mat N = linalg::null_space(J);
  if (N.cols() != static_cast<Eigen::Index>(pivots.size()))
    throw Error(ErrorCode::RankDeficient, "anchor fiber has the wrong dimension at a probe");
  return linalg::normalize_on_pivots(N, pivots);
}

}  // namespace

Vec el_residual(const DiscreteLagrangianSystem& S, const Vec& g, const Vec& h) {
  if (!composable(S.loopoid, g, h)) throw Error(ErrorCode::NotComposable, "el_residual needs beta(g) = alpha(h)");
  return dl(frame_at(S, beta_of(S.loopoid, g)), S, g, h);
}

Vec step_solve(const DiscreteLagrangianSystem& S, const Vec& g, const std::optional<Vec>& branch_seed) {
  const ChartedQuasiloopoid& Q = S.loopoid;
  const Vec u = beta_of(Q, g);
  const FrameField F = frame_at(S, u);
  Vec seed = branch_seed ? *branch_seed : Q.unit(u);
  if (seed.size() != Q.dim_g) throw Error(ErrorCode::UsageError, "branch seed has the wrong dimension");
  const NewtonReport rep =
      newton_solve([&](const Vec& h) { return system_residual(F, S, g, h); }, std::move(seed), S.newton);
  return rep.x;
}

Trajectory trajectory(const DiscreteLagrangianSystem& S, const Vec& g0, int n, const std::optional<Vec>& branch_seed) {
  Trajectory t;
  t.points.push_back(g0);
  for (int i = 0; i < n; ++i) {
    const Vec& g = t.points.back();
    Vec h;
    try {
      h = step_solve(S, g, i == 0 ? branch_seed : std::nullopt);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(i + 1) + ": " + e.what());
    }
    const FrameField F = frame_at(S, beta_of(S.loopoid, g));
    t.residuals.push_back(system_residual(F, S, g, h).norm());
    t.composable_gaps.push_back(composable_gap(S.loopoid, g, h));
    t.points.push_back(std::move(h));
  }
  return t;
}

Vec legendre(const FrameField& F, const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g) {
  const ChartedQuasiloopoid& Q = F.loopoid();
  const Vec u = side == LegendreSide::Plus ? beta_of(Q, g) : alpha_of(Q, g);
  const AlgebroidFrame fr = F.at(u);
  const Vec p = Q.unit(u);
  const double h = numdiff::scaled_step(Q.fd_step, p.norm());
  Vec out(fr.rank);
  for (int i = 0; i < fr.rank; ++i) {
    if (side == LegendreSide::Plus) {
      const Vec v = fr.alpha_vertical.col(i);
      out[i] = numdiff::along(
          [&](double t) { return S.L(Q.mul(g, snap_to_fiber(Q, Anchor::Alpha, p + t * v, u))); }, h);
    } else {
      const Vec v = fr.beta_vertical.col(i);
      out[i] = numdiff::along(
          [&](double t) { return S.L(Q.mul(snap_to_fiber(Q, Anchor::Beta, p + t * v, u), g)); }, h);
    }
  }
  return out;
}

Vec legendre(const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g) {
  const Vec u = side == LegendreSide::Plus ? beta_of(S.loopoid, g) : alpha_of(S.loopoid, g);
  return legendre(frame_at(S, u), S, side, g);
}

double legendre_cross_check(const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g) {
  const Anchor a = side == LegendreSide::Plus ? Anchor::Beta : Anchor::Alpha;
  const Vec u = a == Anchor::Beta ? beta_of(S.loopoid, g) : alpha_of(S.loopoid, g);
  const FrameField F = frame_at(S, u);
  return (legendre(F, S, side, g) - cotangent_fibration(F, a, {g, S.L.gradient(g)})).norm();
}

RegularityReport regularity_check(const DiscreteLagrangianSystem& S, const Vec& u, double probe_radius, int probes,
                                  std::uint64_t seed) {
  const ChartedQuasiloopoid& Q = S.loopoid;
  const FrameField F = frame_at(S, u);
  const Vec p = Q.unit(u);
  const int r = Q.rank();
  const double h = numdiff::scaled_step(kOuterStep, p.norm());
  const auto plus = [&](const Vec& x) { return legendre(F, S, LegendreSide::Plus, x); };
  const auto minus = [&](const Vec& x) { return legendre(F, S, LegendreSide::Minus, x); };

  RegularityReport rep;
  rep.u = u;
  rep.probes = probes;
  rep.plus_directional = Mat::Zero(r, Q.dim_g);
  rep.minus_directional = Mat::Zero(r, Q.dim_g);
  for (int j = 0; j < Q.dim_g; ++j) {
    rep.plus_directional.col(j) = numdiff::directional(plus, p, Vec::Unit(Q.dim_g, j), h);
    rep.minus_directional.col(j) = numdiff::directional(minus, p, Vec::Unit(Q.dim_g, j), h);
  }
  const auto chart = [&](const Vec& x) {
    Vec out(Q.dim_g);
    out << beta_of(Q, x), plus(x);
    return out;
  };
  rep.full_chart_sv = linalg::min_singular_value(numdiff::jacobian(chart, p, kOuterStep));

  const std::vector<int> alpha_pivots = F.pivots();
  const std::vector<int> beta_pivots = linalg::pivot_rows(linalg::null_space(beta_jacobian(Q, p)));
  const auto fiber_sv = [&](const auto& map, const Mat& dirs, const Vec& x) {
    Mat J(r, r);
    for (int j = 0; j < r; ++j) J.col(j) = numdiff::directional(map, x, Vec(dirs.col(j)), h);
    return r > 0 ? linalg::min_singular_value(J) : 1.0;
  };

  CounterRng rng(seed);
  std::vector<Vec> points{p};
  for (int k = 0; k < probes; ++k) points.push_back(p + rng.uniform_vec(Q.dim_g, -probe_radius, probe_radius));
  rep.min_fiber_sv_plus = rep.min_fiber_sv_minus = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vec& x = points[k];
    rep.min_fiber_sv_plus =
        std::min(rep.min_fiber_sv_plus, fiber_sv(plus, fiber_directions(alpha_jacobian(Q, x), alpha_pivots), x));
    rep.min_fiber_sv_minus =
        std::min(rep.min_fiber_sv_minus, fiber_sv(minus, fiber_directions(beta_jacobian(Q, x), beta_pivots), x));
    if (k == 0) continue;
    try {
      const Vec y = step_solve(S, x);
      const FrameField Fx = frame_at(S, beta_of(Q, x));
      rep.flow_matching_residual = std::max(rep.flow_matching_residual, (legendre(Fx, S, LegendreSide::Minus, y) -
                                                   legendre(Fx, S, LegendreSide::Plus, x))
                                                      .norm());
    } catch (const Error&) {
      ++rep.flow_matching_failures;
    }
  }
  rep.regular = rep.min_fiber_sv_plus > rep.threshold;
  rep.minus_regular = rep.min_fiber_sv_minus > rep.threshold;
  return rep;
}

double flow_matching_residual(const DiscreteLagrangianSystem& S, const Trajectory& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < t.points.size(); ++i) {
    const FrameField F = frame_at(S, beta_of(S.loopoid, t.points[i]));
    worst = std::max(worst, (legendre(F, S, LegendreSide::Minus, t.points[i + 1]) -
                             legendre(F, S, LegendreSide::Plus, t.points[i]))
                                .norm());
  }
  return worst;
}

DiscreteLagrangianSystem h_kinetic_system() {
  DiscreteLagrangianSystem S;
  S.loopoid = product_loopoid(h_loop(), 2);
  Polynomial L(6);
  for (int i = 0; i < 6; ++i) {
    std::vector<int> e(6, 0);
    e[static_cast<std::size_t>(i)] = 2;
    L.add_term(0.5, e);
  }
  S.L = ScalarField(L);
  S.name = "h_kinetic";
  return S;
}

DiscreteLagrangianSystem free_particle_system(int n) {
  DiscreteLagrangianSystem S;
  S.loopoid = pair_groupoid(n);
  Polynomial L(2 * n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> uu(static_cast<std::size_t>(2 * n), 0), vv = uu, uv = uu;
    uu[static_cast<std::size_t>(i)] = 2;
    vv[static_cast<std::size_t>(n + i)] = 2;
    uv[static_cast<std::size_t>(i)] = 1;
    uv[static_cast<std::size_t>(n + i)] = 1;
    L.add_term(0.5, uu);
    L.add_term(0.5, vv);
    L.add_term(-1.0, uv);
  }
  S.L = ScalarField(L);
  S.name = "free_particle(" + std::to_string(n) + ")";
  return S;
}

}  // namespace loopoid
