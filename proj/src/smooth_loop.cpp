#include "loopoid/smooth_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"
#include "loopoid/octonion.hpp"

namespace loopoid {

Vec SkewAlgebra::bracket(const Vec& x, const Vec& y) const {
  Vec r(dim);
  for (int k = 0; k < dim; ++k) r[k] = x.dot(s[static_cast<std::size_t>(k)] * y);
  return r;
}

SmoothLoopChart::SmoothLoopChart(int dim, Vec unit, BinaryMap mul, double fd_step)
    : dim_(dim), unit_(std::move(unit)), mul_(std::move(mul)), fd_step_(fd_step) {
  if (unit_.size() != dim_) throw Error(ErrorCode::SchemaError, "unit has wrong dimension");
}

Vec eval_mul(const SmoothLoopChart& L, const Vec& x, const Vec& y) {
  if (x.size() != L.dim() || y.size() != L.dim())
    throw Error(ErrorCode::DomainError, "point has wrong dimension");
  if (L.validity_radius) {
    const double r = *L.validity_radius;
    if ((x - L.unit()).norm() > r || (y - L.unit()).norm() > r)
      throw Error(ErrorCode::DomainError, "point outside the chart's validity radius");
  }
  return L(x, y);
}

Vec divide(const SmoothLoopChart& L, Side side, const Vec& a, const Vec& b, const NewtonOptions& opts) {
  UnaryMap F;
  if (side == Side::Left) {
    F = [&](const Vec& x) -> Vec { return eval_mul(L, a, x) - b; };
  } else {
    F = [&](const Vec& y) -> Vec { return eval_mul(L, y, a) - b; };
  }
  const Vec x0 = b - a + L.unit();
  const Mat J0 = numdiff::jacobian(F, x0, opts.fd_step);
  if (linalg::numerical_rank(J0, 1e-12) < L.dim())
    throw Error(ErrorCode::SingularJacobian, "translation Jacobian is singular at the initial guess");
  return newton_solve(F, x0, opts).x;
}

namespace {

StructureTensor mixed_second_derivatives(const SmoothLoopChart& L, double h) {
  const int n = L.dim();
  const Vec& e = L.unit();
  StructureTensor c = zero_structure(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec d = numdiff::mixed_partial(L.mul(), e, e, i, j, h);
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)](i, j) = d[k];
    }
  }
  return c;
}

}  // namespace

StructureConstants extract_structure_constants(const SmoothLoopChart& L, double noise_tol) {
  const double h = L.fd_step() * std::max(1.0, L.unit().norm());
  StructureConstants out;
  out.c = mixed_second_derivatives(L, h);
  const StructureTensor c2 = mixed_second_derivatives(L, 2.0 * h);
  const int n = L.dim();
  out.algebra.dim = n;
  out.algebra.s = zero_structure(n);
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    out.algebra.s[kk] = out.c[kk] - out.c[kk].transpose();
    const Mat s2 = c2[kk] - c2[kk].transpose();
    if (n > 0) out.noise = std::max(out.noise, (out.algebra.s[kk] - s2).cwiseAbs().maxCoeff());
  }
  if (out.noise > noise_tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "structure constants unstable under step doubling (%.3g)", out.noise);
    throw Error(ErrorCode::NumericalNoise, buf);
  }
  return out;
}

SmoothLoopChart bracket_loop(int dim, const StructureTensor& bracket) {
  if (static_cast<int>(bracket.size()) != dim)
    throw Error(ErrorCode::NotAntisymmetric, "bracket tensor has wrong size");
  for (const auto& m : bracket) {
    if (m.rows() != dim || m.cols() != dim)
      throw Error(ErrorCode::NotAntisymmetric, "bracket tensor has wrong size");
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(ErrorCode::NotAntisymmetric, "bracket constants are not antisymmetric");
  }
  SkewAlgebra A{dim, bracket};
  SmoothLoopChart L(dim, Vec::Zero(dim), [A](const Vec& x, const Vec& y) -> Vec {
    return x + y + 0.5 * A.bracket(x, y);
  });
  L.name = "bracket";
  return L;
}

SmoothLoopChart polynomial_loop(const BiPolynomialMap& mul, Vec unit) {
  const int n = mul.dim;
  SmoothLoopChart L(n, std::move(unit), [mul](const Vec& x, const Vec& y) { return mul(x, y); });
  L.name = "polynomial";
  return L;
}

SmoothLoopChart abelian_loop(int dim) {
  SmoothLoopChart L(dim, Vec::Zero(dim), [](const Vec& x, const Vec& y) -> Vec { return x + y; });
  L.inverse = [](const Vec& x) -> Vec { return -x; };
  L.name = "abelian";
  return L;
}

SmoothLoopChart octonion_loop() {
  Vec e = Vec::Zero(8);
  e[0] = 1.0;
  SmoothLoopChart L(8, e, [](const Vec& x, const Vec& y) -> Vec {
    return (Octoniond::from(x) * Octoniond::from(y)).coeffs();
  });
  L.inverse = [](const Vec& x) -> Vec { return Octoniond::from(x).inverse().coeffs(); };
  L.name = "octonion";
  return L;
}

LoopChartReport check_loop_chart(const SmoothLoopChart& L, int samples, CounterRng& rng, double radius) {
  LoopChartReport rep;
  rep.min_left_translation_sv = std::numeric_limits<double>::infinity();
  rep.min_right_translation_sv = std::numeric_limits<double>::infinity();
  const int n = L.dim();
  const Vec& e = L.unit();
  const double h = L.fd_step();
  for (int s = 0; s < samples; ++s) {
    const Vec g = e + rng.uniform_vec(n, -radius, radius);
    const Vec k = e + rng.uniform_vec(n, -radius, radius);
    rep.unit_residual = std::max({rep.unit_residual, (L(e, g) - g).norm(), (L(g, e) - g).norm()});
    const Mat Jl = numdiff::jacobian([&](const Vec& y) { return L(g, y); }, k, h);
    const Mat Jr = numdiff::jacobian([&](const Vec& x) { return L(x, k); }, g, h);
    rep.min_left_translation_sv = std::min(rep.min_left_translation_sv, linalg::min_singular_value(Jl));
    rep.min_right_translation_sv = std::min(rep.min_right_translation_sv, linalg::min_singular_value(Jr));
    if (L.inverse) {
      const Vec gi = L.inverse(g);
      rep.inverse_residual =
          std::max({rep.inverse_residual, (L(gi, L(g, k)) - k).norm(), (L(L(k, g), gi) - k).norm()});
    }
  }
  if (n == 0) rep.min_left_translation_sv = rep.min_right_translation_sv = 1.0;
  rep.ok = rep.unit_residual < 1e-9 && rep.min_left_translation_sv > 1e-8 &&
           rep.min_right_translation_sv > 1e-8 && rep.inverse_residual < 1e-8;
  return rep;
}

double malcev_residual(const SkewAlgebra& A, int samples, CounterRng& rng) {
  double worst = 0.0;
  const auto b = [&](const Vec& x, const Vec& y) { return A.bracket(x, y); };
  for (int s = 0; s < samples; ++s) {
    const Vec X = rng.uniform_vec(A.dim, -1, 1);
    const Vec Y = rng.uniform_vec(A.dim, -1, 1);
    const Vec Z = rng.uniform_vec(A.dim, -1, 1);
    const Vec lhs = b(b(X, Y), b(X, Z));
    const Vec rhs = b(b(b(X, Y), Z), X) + b(b(b(Y, Z), X), X) + b(b(b(Z, X), X), Y);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

double jacobi_residual(const SkewAlgebra& A, int samples, CounterRng& rng) {
  double worst = 0.0;
  const auto b = [&](const Vec& x, const Vec& y) { return A.bracket(x, y); };
  for (int s = 0; s < samples; ++s) {
    const Vec X = rng.uniform_vec(A.dim, -1, 1);
    const Vec Y = rng.uniform_vec(A.dim, -1, 1);
    const Vec Z = rng.uniform_vec(A.dim, -1, 1);
    worst = std::max(worst, (b(X, b(Y, Z)) + b(Y, b(Z, X)) + b(Z, b(X, Y))).norm());
  }
  return worst;
}

StructureTensor random_antisymmetric(int dim, CounterRng& rng, double lo, double hi) {
  StructureTensor C = zero_structure(dim);
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        const double v = rng.uniform(lo, hi);
        C[static_cast<std::size_t>(k)](i, j) = v;
        C[static_cast<std::size_t>(k)](j, i) = -v;
      }
    }
  }
  return C;
}

SmoothLoopChart h_loop() {
  BiPolynomialMap m;
  m.dim = 2;
  m.components = {
      {{1.0, {1, 0}, {0, 0}}, {1.0, {0, 0}, {1, 0}}, {1.0, {1, 0}, {0, 1}}},
      {{1.0, {0, 1}, {0, 0}}, {1.0, {0, 0}, {0, 1}}, {1.0, {0, 1}, {1, 0}}},
  };
  SmoothLoopChart L = polynomial_loop(m, Vec::Zero(2));
  L.name = "H";
  return L;
}

}  // namespace loopoid
