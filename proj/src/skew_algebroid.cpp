#include "loopoid/skew_algebroid.hpp"

#include <algorithm>
#include <cmath>

#include "loopoid/linalg.hpp"
#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

constexpr double kFieldStep = 1e-4;

Vec bracket_constant(const StructureTensor& C, const Vec& f, const Vec& g) {
  Vec out(static_cast<Eigen::Index>(C.size()));
  for (std::size_t k = 0; k < C.size(); ++k) out[static_cast<Eigen::Index>(k)] = f.dot(C[k] * g);
  return out;
}

Vec basis(int r, int i) { return Vec::Unit(r, i); }

struct ProlongFrame {
  Mat dpi;
  Mat V;  // dim_p x r
  Mat K;  // dim_p x k
};

}  // namespace

Section constant_section(const Vec& coeffs) {
  return [coeffs](const Vec&) { return coeffs; };
}

Vec anchor_of(const SkewAlgebroidChart& A, const Section& X, const Vec& x) { return A.anchor(x) * X(x); }

Vec leibniz_bracket(const SkewAlgebroidChart& A, const Section& X, const Section& Y, const Vec& x) {
  const Vec f = X(x);
  const Vec g = Y(x);
  Vec out = bracket_constant(A.structure(x), f, g);
  if (A.base_dim > 0) {
    const Mat rho = A.anchor(x);
    const double h = numdiff::scaled_step(A.fd_step, x.norm());
    out += numdiff::directional(Y, x, Vec(rho * f), h);
    out -= numdiff::directional(X, x, Vec(rho * g), h);
  }
  return out;
}

double leibniz_residual(const SkewAlgebroidChart& A, const Section& X, const Section& Y, const ScalarField& f,
                        const Vec& x) {
  const Section fY = [&](const Vec& p) -> Vec { return f(p) * Y(p); };
  const Vec lhs = leibniz_bracket(A, X, fY, x);
  const double Xf = A.base_dim > 0 ? f.gradient(x).dot(anchor_of(A, X, x)) : 0.0;
  const Vec rhs = f(x) * leibniz_bracket(A, X, Y, x) + Xf * Y(x);
  return (lhs - rhs).norm();
}

double almost_lie_residual_at(const SkewAlgebroidChart& A, const Vec& x) {
  if (A.base_dim == 0) return 0.0;
  const int r = A.rank;
  const StructureTensor C = A.structure(x);
  const Mat rho = A.anchor(x);
  double worst = 0.0;
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      const Vec lhs = rho * bracket_constant(C, basis(r, a), basis(r, b));
      const auto Va = [&](const Vec& p) -> Vec { return A.anchor(p).col(a); };
      const auto Vb = [&](const Vec& p) -> Vec { return A.anchor(p).col(b); };
      const Vec rhs = numdiff::lie_bracket(Va, Vb, x, numdiff::scaled_step(kFieldStep, x.norm()));
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

AlmostLieReport check_almost_lie(const SkewAlgebroidChart& A, int samples, CounterRng& rng, double radius,
                                 double tol) {
  AlmostLieReport rep;
  rep.samples = samples;
  rep.tol = tol;
  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.uniform_vec(A.base_dim, -radius, radius);
    for (const auto& ck : A.structure(x))
      if (ck.size() > 0)
        rep.antisymmetry_residual = std::max(rep.antisymmetry_residual, (ck + ck.transpose()).cwiseAbs().maxCoeff());
    rep.residual = std::max(rep.residual, almost_lie_residual_at(A, x));
  }
  rep.almost_lie = rep.residual < tol && rep.antisymmetry_residual < 1e-9;
  return rep;
}

double algebroid_jacobi_residual(const SkewAlgebroidChart& A, int samples, CounterRng& rng, double radius) {
  const int r = A.rank;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.uniform_vec(A.base_dim, -radius, radius);
    for (int a = 0; a < r; ++a) {
      for (int b = a + 1; b < r; ++b) {
        for (int c = b + 1; c < r; ++c) {
          const Section ea = constant_section(basis(r, a));
          const Section eb = constant_section(basis(r, b));
          const Section ec = constant_section(basis(r, c));
          const auto br = [&](const Section& X, const Section& Y) -> Section {
            return [&A, X, Y](const Vec& p) { return leibniz_bracket(A, X, Y, p); };
          };
          const Vec j = leibniz_bracket(A, ea, br(eb, ec), x) + leibniz_bracket(A, eb, br(ec, ea), x) +
                        leibniz_bracket(A, ec, br(ea, eb), x);
          worst = std::max(worst, j.norm());
        }
      }
    }
  }
  return worst;
}

namespace {

ProlongFrame prolong_frame(const SkewAlgebroidChart& A, const FibrationChart& P, const std::vector<int>& pivots,
                           const Vec& p) {
  ProlongFrame F;
  F.dpi = numdiff::jacobian(P.pi, p, A.fd_step);
  const Mat rho = A.base_dim > 0 ? A.anchor(P.pi(p)) : Mat(0, A.rank);
  F.V = A.base_dim > 0 ? Mat(linalg::pinv(F.dpi) * rho) : Mat::Zero(P.dim_p, A.rank);
  if (P.fiber_dim() > 0) {
    F.K = linalg::normalize_on_pivots(linalg::null_space(F.dpi), pivots);
  } else {
    F.K = Mat(P.dim_p, 0);
  }
  return F;
}

std::vector<int> reference_pivots(const SkewAlgebroidChart& A, const FibrationChart& P) {
  if (P.fiber_dim() == 0) return {};
  const Vec p0 = P.lift(Vec::Zero(P.dim_m), Vec::Zero(P.fiber_dim()));
  return linalg::pivot_rows(linalg::null_space(numdiff::jacobian(P.pi, p0, A.fd_step)));
}

Mat prolong_anchor(const SkewAlgebroidChart& A, const FibrationChart& P, const std::vector<int>& pivots,
                   const Vec& p) {
  const ProlongFrame F = prolong_frame(A, P, pivots, p);
  Mat out(P.dim_p, A.rank + P.fiber_dim());
  out << F.V, F.K;
  return out;
}

// Coefficients of the bracket of frame elements a, b and the part of its
// tangent component that falls outside the prolonged bundle.
std::pair<Vec, double> prolong_bracket(const SkewAlgebroidChart& A, const FibrationChart& P,
                                       const std::vector<int>& pivots, const Vec& p, int a, int b) {
  const int r = A.rank;
  const int k = P.fiber_dim();
  const auto col = [&](int i) {
    return [&, i](const Vec& q) -> Vec { return prolong_anchor(A, P, pivots, q).col(i); };
  };
  const Vec tp = numdiff::lie_bracket(col(a), col(b), p, kFieldStep);
  Vec e = Vec::Zero(r);
  if (a < r && b < r) e = bracket_constant(A.structure(P.pi(p)), basis(r, a), basis(r, b));
  const ProlongFrame F = prolong_frame(A, P, pivots, p);
  const Vec w = tp - F.V * e;
  Vec mu = k > 0 ? linalg::lstsq(F.K, w) : Vec(0);
  Vec coef(r + k);
  coef << e, mu;
  const double defect = (w - F.K * mu).norm();
  return {coef, defect};
}

}  // namespace

double prolongation_closure_residual(const SkewAlgebroidChart& A, const FibrationChart& P, const Vec& p) {
  const auto pivots = reference_pivots(A, P);
  double worst = 0.0;
  for (int a = 0; a < A.rank; ++a)
    for (int b = a + 1; b < A.rank; ++b) worst = std::max(worst, prolong_bracket(A, P, pivots, p, a, b).second);
  return worst;
}

SkewAlgebroidChart prolong_algebroid(const SkewAlgebroidChart& A, const FibrationChart& P, int samples,
                                     std::uint64_t seed) {
  if (P.dim_m != A.base_dim) throw Error(ErrorCode::SchemaError, "fibration base dimension differs from the algebroid base");
  CounterRng rng(seed);
  int fiber_rank = -1;
  for (int s = 0; s < samples; ++s) {
    const Vec p = rng.uniform_vec(P.dim_p, -0.5, 0.5);
    const Mat dpi = numdiff::jacobian(P.pi, p, A.fd_step);
    if (linalg::numerical_rank(dpi) < P.dim_m)
      throw Error(ErrorCode::NotSubmersion, "pi is not a submersion at a sampled point");
    // rank(E) + dim P - dim(rho(E) + T pi(TP))
    Mat span(P.dim_m, A.rank + P.dim_p);
    if (P.dim_m > 0) span << A.anchor(P.pi(p)), dpi;
    const int rk = A.rank + P.dim_p - linalg::numerical_rank(span);
    if (fiber_rank >= 0 && rk != fiber_rank)
      throw Error(ErrorCode::RankNotConstant, "prolonged fiber dimension varies across samples");
    fiber_rank = rk;
    const double defect = prolongation_closure_residual(A, P, p);
    if (defect > 1e-6)
      throw Error(ErrorCode::NotClosed,
                  "bracket leaves the prolonged bundle; the input anchor is not a bracket homomorphism");
  }

  const auto pivots = reference_pivots(A, P);
  SkewAlgebroidChart out;
  out.base_dim = P.dim_p;
  out.rank = A.rank + P.fiber_dim();
  out.fd_step = A.fd_step;
  out.name = "prolongation(" + A.name + "," + P.name + ")";
  out.anchor = [A, P, pivots](const Vec& p) { return prolong_anchor(A, P, pivots, p); };
  out.structure = [A, P, pivots](const Vec& p) {
    const int R = A.rank + P.fiber_dim();
    StructureTensor C = zero_structure(R);
    for (int a = 0; a < R; ++a) {
      for (int b = a + 1; b < R; ++b) {
        const Vec coef = prolong_bracket(A, P, pivots, p, a, b).first;
        for (int k = 0; k < R; ++k) {
          C[static_cast<std::size_t>(k)](a, b) = coef[k];
          C[static_cast<std::size_t>(k)](b, a) = -coef[k];
        }
      }
    }
    return C;
  };
  return out;
}

SkewAlgebroidChart tangent_bundle_chart(int m) {
  SkewAlgebroidChart A;
  A.base_dim = m;
  A.rank = m;
  A.structure = [m](const Vec&) { return zero_structure(m); };
  A.anchor = [m](const Vec&) -> Mat { return Mat::Identity(m, m); };
  A.name = "tangent";
  return A;
}

SkewAlgebroidChart skew_algebra_chart(const SkewAlgebra& g) {
  SkewAlgebroidChart A;
  A.base_dim = 0;
  A.rank = g.dim;
  A.structure = [g](const Vec&) { return g.s; };
  A.anchor = [r = g.dim](const Vec&) -> Mat { return Mat(0, r); };
  A.name = "skew_algebra";
  return A;
}

SkewAlgebroidChart tangent_plus_algebra_chart(int m, const SkewAlgebra& g) {
  const int n = g.dim;
  const int r = m + n;
  StructureTensor C = zero_structure(r);
  for (int k = 0; k < n; ++k)
    C[static_cast<std::size_t>(m + k)].block(m, m, n, n) = g.s[static_cast<std::size_t>(k)];
  Mat rho = Mat::Zero(m, r);
  rho.leftCols(m).setIdentity();
  SkewAlgebroidChart A;
  A.base_dim = m;
  A.rank = r;
  A.structure = [C](const Vec&) { return C; };
  A.anchor = [rho](const Vec&) { return rho; };
  A.name = "tangent_plus_algebra";
  return A;
}

SkewAlgebroidChart affine_line_chart(double s) {
  SkewAlgebroidChart A;
  A.base_dim = 1;
  A.rank = 2;
  A.structure = [](const Vec&) {
    StructureTensor C = zero_structure(2);
    C[0](0, 1) = 1.0;
    C[0](1, 0) = -1.0;
    return C;
  };
  A.anchor = [s](const Vec& x) {
    Mat rho(1, 2);
    rho << 1.0, s * x[0];
    return rho;
  };
  A.name = "affine_line";
  return A;
}

SkewAlgebroidChart polynomial_chart(int m, int r, const std::vector<std::vector<std::vector<Polynomial>>>& c,
                                    const std::vector<std::vector<Polynomial>>& rho) {
  if (static_cast<int>(c.size()) != r) throw Error(ErrorCode::SchemaError, "structure functions need rank entries");
  for (const auto& ck : c) {
    if (static_cast<int>(ck.size()) != r) throw Error(ErrorCode::SchemaError, "structure functions must be r x r");
    for (const auto& row : ck) {
      if (static_cast<int>(row.size()) != r) throw Error(ErrorCode::SchemaError, "structure functions must be r x r");
      for (const auto& p : row)
        if (p.nvars() != m) throw Error(ErrorCode::SchemaError, "structure function arity differs from base_dim");
    }
  }
  if (static_cast<int>(rho.size()) != m) throw Error(ErrorCode::SchemaError, "anchor needs base_dim rows");
  for (const auto& row : rho) {
    if (static_cast<int>(row.size()) != r) throw Error(ErrorCode::SchemaError, "anchor rows need rank entries");
    for (const auto& p : row)
      if (p.nvars() != m) throw Error(ErrorCode::SchemaError, "anchor arity differs from base_dim");
  }
  // Antisymmetry is checked on the symbolic sum.
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const Polynomial sum = c[k][i][j] + c[k][j][i];
        for (const auto& t : sum.terms())
          if (std::abs(t.coef) > 1e-12)
            throw Error(ErrorCode::NotAntisymmetric, "structure functions are not antisymmetric");
      }
  SkewAlgebroidChart A;
  A.base_dim = m;
  A.rank = r;
  A.structure = [c, r](const Vec& x) {
    StructureTensor C = zero_structure(r);
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) C[static_cast<std::size_t>(k)](i, j) = c[k][i][j](x);
    return C;
  };
  A.anchor = [rho, m, r](const Vec& x) {
    Mat R(m, r);
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < r; ++i) R(b, i) = rho[b][i](x);
    return R;
  };
  A.name = "polynomial";
  return A;
}

}  // namespace loopoid
