#pragma once

#include <vector>

#include "loopoid/core.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/polynomial.hpp"
#include "loopoid/random.hpp"
#include "loopoid/skew_algebroid.hpp"

namespace loopoid {

/// Bases of AG at a unit point u. Columns of alpha_vertical span ker T alpha
/// at eps(u); beta_vertical column i is the beta-vertical representative of
/// the same normal class; tm_basis spans T eps.
struct AlgebroidFrame {
  Vec u;
  int rank = 0;
  Mat alpha_vertical;  // dim_g x r
  Mat beta_vertical;   // dim_g x r
  Mat tm_basis;        // dim_g x dim_m
  Mat anchor_left;     // dim_m x r, T beta of alpha_vertical
  Mat anchor_right;    // dim_m x r, T alpha of beta_vertical
};

/// Frames along M normalized on pivot rows chosen once at a reference point,
/// so that constant frame coefficients define smooth sections.
class FrameField {
 public:
  FrameField(const ChartedQuasiloopoid& Q, const Vec& reference_u);

  /// Throws RankDeficient.
  AlgebroidFrame at(const Vec& u) const;
  const std::vector<int>& pivots() const { return pivots_; }
  const ChartedQuasiloopoid& loopoid() const { return Q_; }

 private:
  ChartedQuasiloopoid Q_;
  std::vector<int> pivots_;
};

/// Throws RankDeficient.
AlgebroidFrame algebroid_frame(const ChartedQuasiloopoid& Q, const Vec& u);

/// Left: T l_g of the alpha-vertical representative of X at beta(g).
/// Right: T r_g of the beta-vertical representative of X at alpha(g).
/// X holds frame coefficients. Throws NotOnFiber.
Vec prolong(const FrameField& F, const Vec& X, Side side, const Vec& g);

/// Frame-coefficient section of AG over M.
using AGSection = UnaryMap;

Vec prolong_section(const FrameField& F, const AGSection& X, Side side, const Vec& g);

struct BracketResult {
  Vec value;         // frame coefficients at u
  Vec tm_component;  // component along T eps, zero for prolongations
  Vec raw;           // the vector-field bracket at eps(u)
};

/// [X, Y]_side at u for frame-coefficient sections. Throws FrameSingular.
BracketResult algebroid_bracket(const FrameField& F, Side side, const AGSection& X, const AGSection& Y,
                                const Vec& u);
BracketResult algebroid_bracket(const ChartedQuasiloopoid& Q, Side side, const Vec& X, const Vec& Y,
                                const Vec& u);

/// c[k](i, j) of the side bracket of constant basis sections at u.
StructureTensor bracket_table(const FrameField& F, Side side, const Vec& u);
StructureTensor bracket_table(const ChartedQuasiloopoid& Q, Side side, const Vec& u);

/// rho_l(X) = T beta(X^alpha), rho_r(X) = T alpha(X^beta).
Vec anchor(const AlgebroidFrame& frame, const Vec& X, Side side);

/// The side algebroid of Q as a chart over M (structure functions by
/// bracket_table, anchor from the frame field).
SkewAlgebroidChart loopoid_algebroid(const ChartedQuasiloopoid& Q, Side side, const Vec& reference_u);

/// Almost-Lie check on the side algebroid at base points within radius of u0.
AlmostLieReport check_almost_lie(const ChartedQuasiloopoid& Q, Side side, const Vec& u0, int samples,
                                 CounterRng& rng, double radius = 0.2, double tol = 1e-6);

struct SignReport {
  double bracket_sum = 0.0;        // max |[X,Y]_l + [X,Y]_r|
  double inverse_tangent = 0.0;    // max |T iota(X^alpha) + X^beta|, Q with inverse only
  double anchor_opposition = 0.0;  // max |rho_r + rho_l|
  bool has_inverse = false;
};

/// Basis pairs at sampled base points near u0.
SignReport bracket_sign_residuals(const ChartedQuasiloopoid& Q, const Vec& u0, int samples, CounterRng& rng,
                                  double radius = 0.2);

/// |T iota(X^alpha) + X^beta| over the frame at u. Requires Q.inverse.
double inverse_tangent_residual(const ChartedQuasiloopoid& Q, const Vec& u);

/// Max over basis pairs of |[left X, right Y](e)| for a loop.
double loop_cross_bracket_residual(const SmoothLoopChart& L);

struct ContrastMetric {
  Mat g;  // symmetrized
  double asymmetry = 0.0;
  double jet_residual = 0.0;
};

/// g_ij = left X_i (left X_j (F)) at eps(u). Throws JetNotVanishing when F or
/// dF exceed 1e-7 at sampled points of M near u.
ContrastMetric contrast_metric(const ChartedQuasiloopoid& Q, const ScalarField& F, const Vec& u);

}  // namespace loopoid
