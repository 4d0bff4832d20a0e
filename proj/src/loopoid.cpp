#include "loopoid/loopoid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

Vec concat(std::initializer_list<Vec> parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vec out(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

Vec side_map(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g) {
  return side == Anchor::Alpha ? Q.alpha(g) : Q.beta(g);
}

Mat side_jacobian(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g) {
  return side == Anchor::Alpha ? alpha_jacobian(Q, g) : beta_jacobian(Q, g);
}

}  // namespace

double composable_gap(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h) {
  if (Q.dim_m == 0) return 0.0;
  return (Q.beta(g) - Q.alpha(h)).norm();
}

bool composable(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h) {
  return composable_gap(Q, g, h) < Q.composable_tol;
}

Vec multiply(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h) {
  const double gap = composable_gap(Q, g, h);
  if (!(gap < Q.composable_tol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "beta(g) - alpha(h) has norm %.3g", gap);
    throw Error(ErrorCode::NotComposable, buf);
  }
  return Q.mul(g, h);
}

Mat alpha_jacobian(const ChartedQuasiloopoid& Q, const Vec& g) {
  if (Q.dim_m == 0) return Mat(0, Q.dim_g);
  return numdiff::jacobian(Q.alpha, g, Q.fd_step);
}

Mat beta_jacobian(const ChartedQuasiloopoid& Q, const Vec& g) {
  if (Q.dim_m == 0) return Mat(0, Q.dim_g);
  return numdiff::jacobian(Q.beta, g, Q.fd_step);
}

Mat unit_jacobian(const ChartedQuasiloopoid& Q, const Vec& u) {
  if (Q.dim_m == 0) return Mat(Q.dim_g, 0);
  return numdiff::jacobian(Q.unit, u, Q.fd_step);
}

Vec snap_to_fiber(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g, const Vec& target) {
  if (Q.dim_m == 0) return g;
  const UnaryMap F = [&](const Vec& x) -> Vec { return side_map(Q, side, x) - target; };
  if (F(g).norm() < 1e-14) return g;
  NewtonOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 30;
  const NewtonReport rep =
      newton_iterate(F, g, opts, [&](const Vec& x) { return side_jacobian(Q, side, x); });
  if (!(rep.residual < 0.1 * Q.composable_tol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "fiber projection left a gap of %.3g", rep.residual);
    throw Error(ErrorCode::NotOnFiber, buf);
  }
  return rep.x;
}

Vec sample_base_point(const ChartedQuasiloopoid& Q, CounterRng& rng) {
  return rng.uniform_vec(Q.dim_m, -Q.sample_radius, Q.sample_radius);
}

Vec sample_element(const ChartedQuasiloopoid& Q, CounterRng& rng) {
  const Vec u = sample_base_point(Q, rng);
  return Q.unit(u) + rng.uniform_vec(Q.dim_g, -Q.sample_radius, Q.sample_radius);
}

Vec sample_composable(const ChartedQuasiloopoid& Q, const Vec& g, Anchor side, CounterRng& rng) {
  // side Alpha: h with alpha(h) = beta(g); side Beta: h with beta(h) = alpha(g).
  const Vec target = side == Anchor::Alpha ? Q.beta(g) : Q.alpha(g);
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Vec h0 = Q.unit(target) + rng.uniform_vec(Q.dim_g, -Q.sample_radius, Q.sample_radius);
    try {
      return snap_to_fiber(Q, side, h0, target);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::SamplerExhausted, "could not sample a composable element");
}

AxiomReport check_axioms(const ChartedQuasiloopoid& Q, int samples, CounterRng& rng, double tol) {
  AxiomReport rep;
  rep.samples = samples;
  rep.tol = tol;
  rep.min_alpha_rank = rep.min_beta_rank = Q.dim_m;
  rep.min_left_translation_sv = rep.min_right_translation_sv = std::numeric_limits<double>::infinity();
  if (Q.inverse) rep.ip_residual = rep.ip_identities_residual = 0.0;
  if (Q.left_inverse || Q.inverse) rep.left_ip_residual = 0.0;
  const UnaryMap& eps = Q.unit;
  const auto m = [&](const Vec& a, const Vec& b) { return Q.mul(a, b); };
  const auto bump = [](double& slot, double v) { slot = std::max(slot, v); };

  for (int s = 0; s < samples; ++s) {
    const Vec u = sample_base_point(Q, rng);
    const Vec eu = eps(u);
    if (Q.dim_m > 0) bump(rep.unit_section_residual, std::max((Q.alpha(eu) - u).norm(), (Q.beta(eu) - u).norm()));

    const Vec g = sample_element(Q, rng);
    const Vec h = sample_composable(Q, g, Anchor::Alpha, rng);
    const Vec ea = eps(Q.alpha(g));
    const Vec eb = eps(Q.beta(g));
    bump(rep.unit_law_residual, std::max((m(g, eb) - g).norm(), (m(eps(Q.alpha(h)), h) - h).norm()));

    rep.min_alpha_rank = std::min(rep.min_alpha_rank, linalg::numerical_rank(alpha_jacobian(Q, g)));
    rep.min_beta_rank = std::min(rep.min_beta_rank, linalg::numerical_rank(beta_jacobian(Q, g)));

    const Vec gh = m(g, h);
    if (Q.dim_m > 0) {
      bump(rep.anchor_alpha_residual, (Q.alpha(gh) - Q.alpha(g)).norm());
      bump(rep.anchor_beta_residual, (Q.beta(gh) - Q.beta(h)).norm());
    }

    // Unit in each of the three slots; composability gaps count as failures.
    {
      const Vec eh = eps(Q.beta(h));
      const double r1 = std::max({(m(m(ea, g), h) - m(ea, gh)).norm(), composable_gap(Q, m(ea, g), h),
                                  composable_gap(Q, ea, gh)});
      const double r2 = std::max({(m(m(g, eb), h) - m(g, m(eb, h))).norm(), composable_gap(Q, m(g, eb), h),
                                  composable_gap(Q, g, m(eb, h))});
      const double r3 = std::max({(m(gh, eh) - m(g, m(h, eh))).norm(), composable_gap(Q, gh, eh),
                                  composable_gap(Q, g, m(h, eh))});
      bump(rep.unities_assoc_residual, std::max({r1, r2, r3}));
    }

    // Translations restricted to the fibers they act on.
    {
      const Mat Kh = linalg::null_space(alpha_jacobian(Q, h));
      const Mat Jl = numdiff::jacobian([&](const Vec& y) { return m(g, y); }, h, Q.fd_step);
      const Mat Kg = linalg::null_space(beta_jacobian(Q, g));
      const Mat Jr = numdiff::jacobian([&](const Vec& x) { return m(x, h); }, g, Q.fd_step);
      const double sl = Kh.cols() == 0 ? 1.0 : linalg::min_singular_value(Jl * Kh);
      const double sr = Kg.cols() == 0 ? 1.0 : linalg::min_singular_value(Jr * Kg);
      rep.min_left_translation_sv = std::min(rep.min_left_translation_sv, sl);
      rep.min_right_translation_sv = std::min(rep.min_right_translation_sv, sr);
    }

    if (Q.inverse) {
      const Vec gi = Q.inverse(g);
      const Vec k = sample_composable(Q, g, Anchor::Beta, rng);  // beta(k) = alpha(g)
      bump(*rep.ip_residual, std::max((m(gi, gh) - h).norm(), (m(m(k, g), gi) - k).norm()));
      bump(*rep.ip_identities_residual,
           std::max({(m(g, gi) - ea).norm(), (m(gi, g) - eb).norm(), (Q.inverse(gi) - g).norm(),
                     (Q.inverse(gh) - m(Q.inverse(h), gi)).norm()}));
    }
    if (Q.left_inverse || Q.inverse) {
      const Vec gl = Q.left_inverse ? Q.left_inverse(g) : Q.inverse(g);
      bump(*rep.left_ip_residual, (m(gl, gh) - h).norm());
    }
  }

  const double sv_floor = 1e-6;
  rep.quasiloopoid = rep.unit_section_residual < tol && rep.unit_law_residual < tol &&
                     rep.min_alpha_rank == Q.dim_m && rep.min_beta_rank == Q.dim_m &&
                     rep.min_left_translation_sv > sv_floor && rep.min_right_translation_sv > sv_floor;
  rep.unities_associative = rep.unities_assoc_residual < tol;
  rep.anchor_morphism = rep.anchor_alpha_residual < tol && rep.anchor_beta_residual < tol;
  rep.loopoid = rep.quasiloopoid && rep.unities_associative && rep.anchor_morphism;
  rep.inverse_property = rep.ip_residual && *rep.ip_residual < tol && *rep.ip_identities_residual < tol;
  rep.left_inverse_property = rep.left_ip_residual && *rep.left_ip_residual < tol;
  return rep;
}

ChartedQuasiloopoid product_loopoid(const SmoothLoopChart& L, int n) {
  const int d = L.dim();
  ChartedQuasiloopoid Q;
  Q.dim_g = d + 2 * n;
  Q.dim_m = n;
  Q.alpha = [d, n](const Vec& v) -> Vec { return v.segment(d, n); };
  Q.beta = [d, n](const Vec& v) -> Vec { return v.segment(d + n, n); };
  const Vec e = L.unit();
  Q.unit = [e](const Vec& s) -> Vec { return concat({e, s, s}); };
  Q.mul = [L, d, n](const Vec& a, const Vec& b) -> Vec {
    return concat({L(a.head(d), b.head(d)), a.segment(d, n), b.segment(d + n, n)});
  };
  if (L.inverse) {
    Q.inverse = [L, d, n](const Vec& v) -> Vec {
      return concat({L.inverse(v.head(d)), v.segment(d + n, n), v.segment(d, n)});
    };
  }
  Q.fd_step = L.fd_step();
  Q.claims_loopoid = true;
  Q.claims_ip = static_cast<bool>(L.inverse);
  Q.name = "product(" + L.name + "," + std::to_string(n) + ")";
  return Q;
}

ChartedQuasiloopoid pair_groupoid(int n) {
  SmoothLoopChart point(0, Vec(0), [](const Vec&, const Vec&) -> Vec { return Vec(0); });
  point.inverse = [](const Vec&) -> Vec { return Vec(0); };
  point.name = "point";
  ChartedQuasiloopoid Q = product_loopoid(point, n);
  Q.name = "pair_groupoid(" + std::to_string(n) + ")";
  return Q;
}

ChartedQuasiloopoid loop_as_loopoid(const SmoothLoopChart& L) {
  ChartedQuasiloopoid Q = product_loopoid(L, 0);
  Q.name = L.name;
  return Q;
}

PhiFunction phi_from_polynomial(const Polynomial& p) {
  if (p.nvars() != 1) throw Error(ErrorCode::SchemaError, "phi must be a polynomial in one variable");
  const Polynomial dp = p.derivative(0);
  PhiFunction f;
  f.phi = [p](double x) { return p(Vec::Constant(1, x)); };
  f.dphi = [dp](double x) { return dp(Vec::Constant(1, x)); };
  f.name = "polynomial";
  return f;
}

ChartedQuasiloopoid phi_quasiloopoid(const PhiFunction& phi, int samples, std::uint64_t seed) {
  const auto dphi = [phi](double x) {
    if (phi.dphi) return phi.dphi(x);
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (phi.phi(x + h) - phi.phi(x - h)) / (2.0 * h);
  };
  CounterRng rng(seed);
  double sign = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = rng.uniform(-2.0, 2.0);
    const double scale = std::max(1.0, std::abs(phi.phi(x)));
    if (std::abs(phi.phi(-x) + phi.phi(x)) > 1e-9 * scale)
      throw Error(ErrorCode::NotOdd, "phi(-x) != -phi(x) at a sampled point");
    const double d = dphi(x);
    if (!(std::abs(d) > 1e-9) || (sign != 0.0 && d * sign < 0.0))
      throw Error(ErrorCode::NotMonotone, "phi' vanishes or changes sign at a sampled point");
    sign = d > 0.0 ? 1.0 : -1.0;
  }
  if (!(std::abs(dphi(0.0)) > 1e-9)) throw Error(ErrorCode::NotMonotone, "phi'(0) = 0");

  const auto f = phi.phi;
  ChartedQuasiloopoid Q;
  Q.dim_g = 3;
  Q.dim_m = 2;
  // g = (a1, b1, b2), a2 = a1 - phi(b1 - b2).
  Q.alpha = [](const Vec& g) -> Vec { return g.head(2); };
  Q.beta = [f](const Vec& g) -> Vec { return Eigen::Vector2d(g[0] - f(g[1] - g[2]), g[2]); };
  Q.unit = [](const Vec& u) -> Vec { return Eigen::Vector3d(u[0], u[1], u[1]); };
  Q.mul = [](const Vec& g, const Vec& h) -> Vec { return Eigen::Vector3d(g[0], g[1], h[2]); };
  Q.left_inverse = [f](const Vec& g) -> Vec {
    return Eigen::Vector3d(g[0] - f(g[1] - g[2]), g[2], g[1]);
  };
  Q.claims_loopoid = false;
  Q.name = "phi(" + phi.name + ")";
  return Q;
}

FibrationChart trivial_fibration(int dim_m, int fiber_dim) {
  FibrationChart P;
  P.dim_p = dim_m + fiber_dim;
  P.dim_m = dim_m;
  P.pi = [dim_m](const Vec& p) -> Vec { return p.head(dim_m); };
  P.lift = [](const Vec& m, const Vec& f) -> Vec { return concat({m, f}); };
  P.fiber = [dim_m, fiber_dim](const Vec& p) -> Vec { return p.segment(dim_m, fiber_dim); };
  P.name = "trivial";
  return P;
}

FibrationChart sheared_fibration(int dim_m, int fiber_dim) {
  FibrationChart P;
  P.dim_p = dim_m + fiber_dim;
  P.dim_m = dim_m;
  P.pi = [dim_m, fiber_dim](const Vec& p) -> Vec {
    const Vec f = p.segment(dim_m, fiber_dim);
    return p.head(dim_m) + Vec::Constant(dim_m, 0.5 * f.squaredNorm());
  };
  P.lift = [dim_m](const Vec& m, const Vec& f) -> Vec {
    return concat({Vec(m - Vec::Constant(dim_m, 0.5 * f.squaredNorm())), f});
  };
  P.fiber = [dim_m, fiber_dim](const Vec& p) -> Vec { return p.segment(dim_m, fiber_dim); };
  P.name = "sheared";
  return P;
}

ChartedQuasiloopoid prolongation_loopoid(const ChartedQuasiloopoid& Q, const FibrationChart& P) {
  if (P.dim_m != Q.dim_m) throw Error(ErrorCode::SchemaError, "fibration base dimension differs from dim_m");
  {
    CounterRng rng(0x9e11);
    for (int s = 0; s < 16; ++s) {
      const Vec p = rng.uniform_vec(P.dim_p, -1.0, 1.0);
      const Mat Dpi = numdiff::jacobian(P.pi, p, Q.fd_step);
      if (linalg::numerical_rank(Dpi) < P.dim_m)
        throw Error(ErrorCode::NotSubmersion, "pi is not a submersion at a sampled point");
    }
  }
  const int k = P.fiber_dim();
  const int dg = Q.dim_g;
  ChartedQuasiloopoid R;
  R.dim_g = dg + 2 * k;
  R.dim_m = P.dim_p;
  // v = (f, g, f')
  R.alpha = [Q, P, k](const Vec& v) -> Vec { return P.lift(Q.alpha(v.segment(k, Q.dim_g)), v.head(k)); };
  R.beta = [Q, P, k](const Vec& v) -> Vec { return P.lift(Q.beta(v.segment(k, Q.dim_g)), v.tail(k)); };
  R.unit = [Q, P](const Vec& p) -> Vec {
    const Vec f = P.fiber(p);
    return concat({f, Q.unit(P.pi(p)), f});
  };
  R.mul = [Q, k, dg](const Vec& a, const Vec& b) -> Vec {
    return concat({a.head(k), Q.mul(a.segment(k, dg), b.segment(k, dg)), b.tail(k)});
  };
  if (Q.inverse) {
    R.inverse = [Q, k, dg](const Vec& v) -> Vec {
      return concat({v.tail(k), Q.inverse(v.segment(k, dg)), v.head(k)});
    };
  }
  if (Q.left_inverse) {
    R.left_inverse = [Q, k, dg](const Vec& v) -> Vec {
      return concat({v.tail(k), Q.left_inverse(v.segment(k, dg)), v.head(k)});
    };
  }
  R.composable_tol = Q.composable_tol;
  R.fd_step = Q.fd_step;
  R.sample_radius = Q.sample_radius;
  R.claims_loopoid = true;
  R.claims_ip = Q.claims_ip;
  R.name = "prolongation(" + Q.name + "," + P.name + ")";
  return R;
}

LocalSection build_local_section(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g, SliceKind kind) {
  LocalSection s;
  s.side = side;
  s.through = g;
  s.base = Q.dim_m == 0 ? Vec(0) : side_map(Q, side, g);
  const Mat J = side_jacobian(Q, side, g);
  if (Q.dim_m > 0 && linalg::numerical_rank(J) < Q.dim_m)
    throw Error(ErrorCode::NotSubmersion, "side map is not a submersion at the section point");
  if (kind == SliceKind::Pseudoinverse || Q.dim_m == 0) {
    s.slice = Q.dim_m == 0 ? Mat(Q.dim_g, 0) : linalg::pinv(J);
  } else {
    s.slice = unit_jacobian(Q, s.base);
    if (linalg::min_singular_value(J * s.slice) < 1e-8)
      throw Error(ErrorCode::SectionFailure, "unit tangent slice is transverse-degenerate");
  }
  s.map = [q = Q, side, g, slice = s.slice, base = s.base, JS = Mat(J * s.slice)](const Vec& target) -> Vec {
    if (q.dim_m == 0) return g;
    const UnaryMap F = [&](const Vec& z) -> Vec { return side_map(q, side, Vec(g + slice * z)) - target; };
    const Vec z0 = JS.fullPivLu().solve(target - base);
    NewtonOptions opts;
    opts.tol = 1e-13;
    const NewtonReport rep = newton_iterate(F, z0, opts);
    if (!(rep.residual < 1e-11)) throw Error(ErrorCode::NoConvergence, "local section projection failed");
    return g + slice * rep.x;
  };
  return s;
}

IsotropyReport isotropy_samples(const ChartedQuasiloopoid& Q, const Vec& u, int n, CounterRng& rng) {
  IsotropyReport rep;
  rep.u = u;
  const UnaryMap F = [&](const Vec& g) -> Vec { return concat({Q.alpha(g) - u, Q.beta(g) - u}); };
  NewtonOptions opts;
  opts.tol = 1e-13;
  const Vec eu = Q.unit(u);
  for (int s = 0; s < n; ++s) {
    const Vec g0 = eu + rng.uniform_vec(Q.dim_g, -Q.sample_radius, Q.sample_radius);
    const NewtonReport r = newton_iterate(F, g0, opts);
    if (r.residual < 1e-11) {
      rep.samples.push_back(r.x);
      rep.fiber_residual = std::max(rep.fiber_residual, r.residual);
    } else {
      ++rep.failures;
    }
  }
  if (rep.samples.empty()) throw Error(ErrorCode::EmptyFiber, "no element of the isotropy fiber was found");
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const Vec& g = rep.samples[i];
    const Vec& h = rep.samples[(i + 1) % rep.samples.size()];
    rep.closure_residual = std::max(rep.closure_residual, F(Q.mul(g, h)).norm());
    if (Q.inverse) rep.closure_residual = std::max(rep.closure_residual, F(Q.inverse(g)).norm());
  }
  return rep;
}

}  // namespace loopoid
