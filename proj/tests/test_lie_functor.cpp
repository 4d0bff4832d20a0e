#include <gtest/gtest.h>

#include "loopoid/lie_functor.hpp"
#include "loopoid/octonion.hpp"
#include "loopoid/random.hpp"
#include "loopoid/smooth_loop.hpp"

using namespace loopoid;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec r(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) r[i++] = x;
  return r;
}

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

PhiFunction cubic_phi() {
  return {[](double x) { return 3.0 * x + x * x * x; }, [](double x) { return 3.0 + 3.0 * x * x; }, "3x+x^3"};
}

}  // namespace

TEST(LieFunctor, ProductFrameOverH) {
  const ChartedQuasiloopoid Q = product_loopoid(h_loop(), 2);
  const Vec u = v({0.3, -0.2});
  const AlgebroidFrame f = algebroid_frame(Q, u);
  EXPECT_EQ(f.rank, 4);
  EXPECT_LT((alpha_jacobian(Q, Q.unit(u)) * f.alpha_vertical).norm(), 1e-9);
  EXPECT_LT((beta_jacobian(Q, Q.unit(u)) * f.beta_vertical).norm(), 1e-9);
  // alpha-vertical: x1, x2, t1, t2; beta-vertical: x1, x2, s1, s2.
  for (int row : {2, 3}) EXPECT_LT(f.alpha_vertical.row(row).norm(), 1e-9);
  for (int row : {4, 5}) EXPECT_LT(f.beta_vertical.row(row).norm(), 1e-9);
  // Same normal class: the difference is tangent to the units.
  const Mat D = f.alpha_vertical - f.beta_vertical;
  const Mat resid = D - f.tm_basis * f.tm_basis.completeOrthogonalDecomposition().solve(D);
  EXPECT_LT(resid.norm(), 1e-8);
}

TEST(LieFunctor, PairGroupoidFrame) {
  const ChartedQuasiloopoid P = pair_groupoid(1);
  const AlgebroidFrame f = algebroid_frame(P, v({0.4}));
  EXPECT_LT(std::abs(f.alpha_vertical(0, 0)), 1e-9);
  EXPECT_GT(std::abs(f.alpha_vertical(1, 0)), 0.5);
  EXPECT_LT(std::abs(f.beta_vertical(1, 0)), 1e-9);
  EXPECT_NEAR(f.anchor_left(0, 0), -f.anchor_right(0, 0), 1e-9);
}

TEST(LieFunctor, LoopFrameHasNoUnitDirections) {
  const AlgebroidFrame f = algebroid_frame(loop_as_loopoid(h_loop()), Vec(0));
  EXPECT_EQ(f.rank, 2);
  EXPECT_EQ(f.tm_basis.cols(), 0);
}

TEST(LieFunctor, ProlongationsOfH) {
  const ChartedQuasiloopoid Q = product_loopoid(h_loop(), 2);
  const FrameField F(Q, v({0.3, -0.2}));
  const Vec g = v({0.25, -0.4, 0.1, 0.2, 0.3, -0.2});
  const Vec e1 = Vec::Unit(4, 0);
  // left X1 = d/dx1 + x2 d/dx2, right X1 = (1 + x2) d/dx1.
  EXPECT_LT((prolong(F, e1, Side::Left, g) - v({1.0, -0.4, 0, 0, 0, 0})).norm(), 1e-8);
  EXPECT_LT((prolong(F, e1, Side::Right, g) - v({0.6, 0, 0, 0, 0, 0})).norm(), 1e-8);
  // At a unit the left prolongation is the alpha-vertical representative.
  const Vec u = v({0.3, -0.2});
  EXPECT_LT((prolong(F, e1, Side::Left, Q.unit(u)) - F.at(u).alpha_vertical.col(0)).norm(), 1e-9);
}

TEST(LieFunctor, BracketLoopLeftFields) {
  CounterRng rng(1);
  const StructureTensor C = random_antisymmetric(3, rng);
  const ChartedQuasiloopoid Q = loop_as_loopoid(bracket_loop(3, C));
  const FrameField F(Q, Vec(0));
  const Vec x = v({0.1, -0.2, 0.15});
  for (int i = 0; i < 3; ++i) {
    Vec expect = Vec::Unit(3, i);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) expect[k] -= 0.5 * C[k](i, j) * x[j];
    EXPECT_LT((prolong(F, Vec::Unit(3, i), Side::Left, x) - expect).norm(), 1e-6) << i;
  }
}

TEST(LieFunctor, BracketTableOfH) {
  const ChartedQuasiloopoid Q = product_loopoid(h_loop(), 2);
  const Vec u = v({0.3, -0.2});
  const StructureTensor l = bracket_table(Q, Side::Left, u);
  const StructureTensor r = bracket_table(Q, Side::Right, u);
  // [X1, X2]_l = -[X1, X2]_r = X1 - X2, every other basis bracket vanishes.
  StructureTensor expect = zero_structure(4);
  expect[0](0, 1) = 1.0;
  expect[0](1, 0) = -1.0;
  expect[1](0, 1) = -1.0;
  expect[1](1, 0) = 1.0;
  for (int k = 0; k < 4; ++k) {
    EXPECT_LT((l[k] - expect[k]).cwiseAbs().maxCoeff(), 1e-5) << k;
    EXPECT_LT((r[k] + expect[k]).cwiseAbs().maxCoeff(), 1e-5) << k;
  }
}

TEST(LieFunctor, BracketOfSectionWithItselfVanishes) {
  const ChartedQuasiloopoid Q = phi_quasiloopoid(cubic_phi());
  const FrameField F(Q, v({0, 0}));
  const AGSection X = [](const Vec& u) -> Vec { return Vec::Constant(1, 1.0 + u[0] * u[1]); };
  EXPECT_LT(algebroid_bracket(F, Side::Left, X, X, v({0.1, 0.2})).value.norm(), 1e-6);
}

TEST(LieFunctor, LoopBracketMatchesStructureConstants) {
  for (const SmoothLoopChart& L : {h_loop(), octonion_loop()}) {
    const StructureConstants sc = extract_structure_constants(L);
    const StructureTensor t = bracket_table(loop_as_loopoid(L), Side::Left, Vec(0));
    for (int k = 0; k < L.dim(); ++k) EXPECT_LT((t[k] - sc.algebra.s[k]).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(LieFunctor, PhiAnchor) {
  const AlgebroidFrame f = algebroid_frame(phi_quasiloopoid(cubic_phi()), v({0, 0}));
  const Vec rl = anchor(f, Vec::Ones(1), Side::Left);
  const Vec rr = anchor(f, Vec::Ones(1), Side::Right);
  // rho(X) = phi'(0) dx + dy up to the frame scale.
  EXPECT_NEAR(rl[0] / rl[1], 3.0, 1e-7);
  EXPECT_LT((rl + rr).norm(), 1e-8);
}

TEST(LieFunctor, ProductAnchorIsProjection) {
  const AlgebroidFrame f = algebroid_frame(product_loopoid(octonion_loop(), 2), v({0.1, 0.2}));
  const Vec X = v({0, 1, 0, 0, 0, 0, 0, 0, 0.5, -2});
  EXPECT_LT((anchor(f, X, Side::Left) - v({0.5, -2})).norm(), 1e-8);
}

TEST(LieFunctor, AlmostLieOnLoopoids) {
  CounterRng rng(2);
  EXPECT_TRUE(check_almost_lie(product_loopoid(h_loop(), 2), Side::Left, v({0, 0}), 4, rng).almost_lie);
  EXPECT_TRUE(check_almost_lie(product_loopoid(h_loop(), 2), Side::Right, v({0, 0}), 4, rng).almost_lie);
  const ChartedQuasiloopoid R = prolongation_loopoid(product_loopoid(h_loop(), 1), sheared_fibration(1, 1));
  EXPECT_TRUE(check_almost_lie(R, Side::Left, v({0.1, 0.2}), 3, rng).almost_lie);
}

TEST(LieFunctor, BracketsAreOppositeOnInverseLoopoids) {
  CounterRng rng(3);
  for (const ChartedQuasiloopoid& Q : {product_loopoid(octonion_loop(), 1), pair_groupoid(2)}) {
    const SignReport r = bracket_sign_residuals(Q, Vec::Constant(Q.dim_m, 0.1), 3, rng);
    EXPECT_TRUE(r.has_inverse);
    EXPECT_LT(r.bracket_sum, 1e-6) << Q.name;
    EXPECT_LT(r.inverse_tangent, 1e-7) << Q.name;
    EXPECT_LT(r.anchor_opposition, 1e-8) << Q.name;
    EXPECT_LT(inverse_tangent_residual(Q, Vec::Constant(Q.dim_m, 0.1)), 1e-7);
  }
}

TEST(LieFunctor, LeftAndRightFieldsCommuteAtUnit) {
  EXPECT_LT(loop_cross_bracket_residual(h_loop()), 1e-6);
  EXPECT_LT(loop_cross_bracket_residual(octonion_loop()), 1e-6);
}

TEST(LieFunctor, ContrastMetric) {
  const ChartedQuasiloopoid Q = loop_as_loopoid(h_loop());
  const ScalarField F([](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const ContrastMetric m = contrast_metric(Q, F, Vec(0));
  EXPECT_LT((m.g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-5);
  const ContrastMetric m3 = contrast_metric(Q, ScalarField([](const Vec& x) { return 1.5 * x.squaredNorm(); }), Vec(0));
  EXPECT_LT((m3.g - 3.0 * m.g).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT(contrast_metric(Q, ScalarField::zero(2), Vec(0)).g.cwiseAbs().maxCoeff(), 1e-12);
  expect_code(ErrorCode::JetNotVanishing,
              [&] { contrast_metric(Q, ScalarField([](const Vec& x) { return x[0]; }), Vec(0)); });
}
