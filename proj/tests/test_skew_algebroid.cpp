#include <gtest/gtest.h>

#include "loopoid/loopoid.hpp"
#include "loopoid/random.hpp"
#include "loopoid/skew_algebroid.hpp"
#include "loopoid/smooth_loop.hpp"

using namespace loopoid;

namespace {

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

SkewAlgebra so3() {
  SkewAlgebra g{3, zero_structure(3)};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    g.s[k](i, j) = 1.0;
    g.s[k](j, i) = -1.0;
  }
  return g;
}

SkewAlgebra random_algebra(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  return SkewAlgebra{n, random_antisymmetric(n, rng)};
}

}  // namespace

TEST(SkewAlgebroid, AffineLineAlmostLieOnlyForUnitSlope) {
  CounterRng rng(1);
  const AlmostLieReport good = check_almost_lie(affine_line_chart(1.0), 20, rng);
  EXPECT_TRUE(good.almost_lie);
  EXPECT_LT(good.residual, 1e-8);
  const AlmostLieReport bad = check_almost_lie(affine_line_chart(2.0), 20, rng);
  EXPECT_FALSE(bad.almost_lie);
  // rho[e1, e2] = d/dx while [d/dx, 2x d/dx] = 2 d/dx.
  EXPECT_NEAR(bad.residual, 1.0, 1e-6);
}

TEST(SkewAlgebroid, ConstantSectionsContractStructureFunctions) {
  const SkewAlgebra g = random_algebra(3, 2);
  const SkewAlgebroidChart A = tangent_plus_algebra_chart(2, g);
  const Vec x = (Vec(2) << 0.3, -0.2).finished();
  const Vec a = (Vec(5) << 0, 0, 1, 2, -1).finished();
  const Vec b = (Vec(5) << 0, 0, 0.5, -1, 3).finished();
  const Vec br = leibniz_bracket(A, constant_section(a), constant_section(b), x);
  EXPECT_LT(br.head(2).norm(), 1e-12);
  EXPECT_LT((br.tail(3) - g.bracket(a.tail(3), b.tail(3))).norm(), 1e-12);
}

TEST(SkewAlgebroid, TangentBundleBracketIsVectorFieldBracket) {
  const SkewAlgebroidChart T = tangent_bundle_chart(2);
  const Section X = [](const Vec& x) -> Vec { return (Vec(2) << x[1], 0.0).finished(); };
  const Section Y = [](const Vec& x) -> Vec { return (Vec(2) << 0.0, x[0]).finished(); };
  const Vec x = (Vec(2) << 0.7, -0.4).finished();
  // [x2 d1, x1 d2] = x2 d2 - x1 d1.
  EXPECT_LT((leibniz_bracket(T, X, Y, x) - (Vec(2) << -0.7, -0.4).finished()).norm(), 1e-8);
}

TEST(SkewAlgebroid, RankOneChartXfX) {
  // rank-1 chart over R^2 with rho(X) = 3 d/dx + d/dy, as for phi'(0) = 3.
  const std::vector<std::vector<std::vector<Polynomial>>> c = {{{Polynomial(2)}}};
  const std::vector<std::vector<Polynomial>> rho = {{Polynomial::constant(2, 3.0)}, {Polynomial::constant(2, 1.0)}};
  const SkewAlgebroidChart A = polynomial_chart(2, 1, c, rho);
  const ScalarField f(Polynomial(2).add_term(1.0, {2, 0}).add_term(2.0, {1, 1}));
  const Section X = constant_section(Vec::Ones(1));
  const Section fX = [f](const Vec& x) -> Vec { return Vec::Constant(1, f(x)); };
  const Vec x = (Vec(2) << 0.5, -1.5).finished();
  const double rho_f = f.gradient(x).dot((Vec(2) << 3.0, 1.0).finished());
  EXPECT_NEAR(leibniz_bracket(A, X, fX, x)[0], rho_f, 1e-8);
}

TEST(SkewAlgebroid, LeibnizRuleForRandomPolynomials) {
  CounterRng rng(3);
  const SkewAlgebroidChart A = tangent_plus_algebra_chart(2, random_algebra(2, 4));
  for (int rep = 0; rep < 10; ++rep) {
    Polynomial p(2);
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b) p.add_term(rng.uniform(-1, 1), {a, b});
    const Vec cx = rng.uniform_vec(4, -1, 1), cy = rng.uniform_vec(4, -1, 1);
    const Section X = [cx](const Vec& x) -> Vec { return cx * (1.0 + x[0]); };
    const Section Y = [cy](const Vec& x) -> Vec { return cy * (1.0 - x[1] * x[0]); };
    EXPECT_LT(leibniz_residual(A, X, Y, ScalarField(p), rng.uniform_vec(2, -0.5, 0.5)), 1e-6);
  }
}

TEST(SkewAlgebroid, JacobiOnlyForLieAlgebras) {
  CounterRng rng(5);
  EXPECT_LT(algebroid_jacobi_residual(tangent_plus_algebra_chart(1, so3()), 10, rng), 1e-9);
  EXPECT_GT(algebroid_jacobi_residual(tangent_plus_algebra_chart(1, random_algebra(3, 6)), 10, rng), 1e-3);
  EXPECT_TRUE(check_almost_lie(tangent_plus_algebra_chart(1, random_algebra(3, 6)), 10, rng).almost_lie);
}

TEST(SkewAlgebroid, ProlongationOfNonJacobiChartIsAlmostLie) {
  CounterRng rng(7);
  const SkewAlgebroidChart A = tangent_plus_algebra_chart(1, random_algebra(3, 8));
  const SkewAlgebroidChart P = prolong_algebroid(A, sheared_fibration(1, 2));
  EXPECT_EQ(P.base_dim, 3);
  EXPECT_EQ(P.rank, A.rank + 2);
  const AlmostLieReport r = check_almost_lie(P, 10, rng);
  EXPECT_TRUE(r.almost_lie) << r.residual;
  EXPECT_LT(prolongation_closure_residual(A, sheared_fibration(1, 2), rng.uniform_vec(3, -0.5, 0.5)), 1e-6);
}

TEST(SkewAlgebroid, ProlongationOverIdentity) {
  CounterRng rng(9);
  const SkewAlgebroidChart P = prolong_algebroid(affine_line_chart(1.0), trivial_fibration(1, 0));
  EXPECT_EQ(P.rank, 2);
  EXPECT_TRUE(check_almost_lie(P, 10, rng).almost_lie);
}

TEST(SkewAlgebroid, ProlongationOfAlgebraOverPoint) {
  const SkewAlgebroidChart P = prolong_algebroid(skew_algebra_chart(random_algebra(3, 10)), trivial_fibration(0, 2));
  EXPECT_EQ(P.rank, 3 + 2);
  EXPECT_EQ(P.base_dim, 2);
}

TEST(SkewAlgebroid, ProlongationRejectsNonAlmostLie) {
  expect_code(ErrorCode::NotClosed, [] { prolong_algebroid(affine_line_chart(2.0), sheared_fibration(1, 1)); });
}

TEST(SkewAlgebroid, PolynomialChartErrors) {
  const std::vector<std::vector<Polynomial>> rho1 = {{Polynomial::constant(1, 1.0), Polynomial(1)}};
  std::vector<std::vector<std::vector<Polynomial>>> c(2, {{Polynomial(1), Polynomial(1)}, {Polynomial(1), Polynomial(1)}});
  EXPECT_NO_THROW(polynomial_chart(1, 2, c, rho1));
  c[0][0][1] = Polynomial::constant(1, 1.0);
  expect_code(ErrorCode::NotAntisymmetric, [&] { polynomial_chart(1, 2, c, rho1); });
  c[0][1][0] = Polynomial::constant(1, -1.0);
  EXPECT_NO_THROW(polynomial_chart(1, 2, c, rho1));
  expect_code(ErrorCode::SchemaError, [&] { polynomial_chart(2, 2, c, rho1); });
  c.pop_back();
  expect_code(ErrorCode::SchemaError, [&] { polynomial_chart(1, 2, c, rho1); });
}
