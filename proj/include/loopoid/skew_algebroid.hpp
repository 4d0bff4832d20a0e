#pragma once

#include <functional>
#include <string>

#include "loopoid/core.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/polynomial.hpp"
#include "loopoid/random.hpp"
#include "loopoid/smooth_loop.hpp"

namespace loopoid {

/// Skew algebroid on the trivial bundle R^m x R^r given by structure
/// functions c[k](i, j)(x), antisymmetric in (i, j), and anchor columns
/// rho(x) (m x r): [e_i, e_j] = c^k_ij e_k, rho(e_i) = rho(x).col(i).
struct SkewAlgebroidChart {
  int base_dim = 0;
  int rank = 0;
  std::function<StructureTensor(const Vec&)> structure;
  std::function<Mat(const Vec&)> anchor;
  double fd_step = 1e-5;
  std::string name;
};

/// A section as its frame coefficients x -> R^r.
using Section = UnaryMap;

Section constant_section(const Vec& coeffs);

/// [f^i e_i, g^j e_j] = f^i g^j c^k_ij e_k + rho(X)(g^k) e_k - rho(Y)(f^k) e_k at x.
Vec leibniz_bracket(const SkewAlgebroidChart& A, const Section& X, const Section& Y, const Vec& x);

/// rho(X) as a tangent vector at x.
Vec anchor_of(const SkewAlgebroidChart& A, const Section& X, const Vec& x);

/// [X, fY] - f [X, Y] - rho(X)(f) Y at x.
double leibniz_residual(const SkewAlgebroidChart& A, const Section& X, const Section& Y,
                        const ScalarField& f, const Vec& x);

struct AlmostLieReport {
  int samples = 0;
  double residual = 0.0;  // max over samples and basis pairs of |rho[X,Y] - [rho X, rho Y]|
  double antisymmetry_residual = 0.0;
  double tol = 1e-6;
  bool almost_lie = false;
};

/// Max over basis pairs of |rho[e_a, e_b] - [rho e_a, rho e_b]| at x.
double almost_lie_residual_at(const SkewAlgebroidChart& A, const Vec& x);

/// Samples base points in [-radius, radius]^m and all basis pairs.
AlmostLieReport check_almost_lie(const SkewAlgebroidChart& A, int samples, CounterRng& rng,
                                 double radius = 0.5, double tol = 1e-6);

/// Jacobi identity residual of the constant basis brackets at sampled points.
double algebroid_jacobi_residual(const SkewAlgebroidChart& A, int samples, CounterRng& rng,
                                 double radius = 0.5);

/// Prolongation over a submersion pi: P -> M. Frame at p: (e_i, D pi^+ rho_i)
/// for i < r followed by (0, k_j) for a basis k_j of ker D pi. Throws
/// NotSubmersion, RankNotConstant, or NotClosed when A is not almost Lie and
/// the bracket leaves the prolonged bundle.
SkewAlgebroidChart prolong_algebroid(const SkewAlgebroidChart& A, const FibrationChart& pi,
                                     int samples = 8, std::uint64_t seed = 0);

/// Residual of the bracket closure inside the prolonged bundle at p, the
/// quantity NotClosed tests.
double prolongation_closure_residual(const SkewAlgebroidChart& A, const FibrationChart& pi, const Vec& p);

SkewAlgebroidChart tangent_bundle_chart(int m);
/// A skew algebra viewed as an algebroid over a point.
SkewAlgebroidChart skew_algebra_chart(const SkewAlgebra& g);
/// TM x g over R^m: [(X,v),(Y,w)] = ([X,Y], [v,w] + X(w) - Y(v)), rho(X,v) = X.
/// Almost Lie; Jacobi iff g is a Lie algebra.
SkewAlgebroidChart tangent_plus_algebra_chart(int m, const SkewAlgebra& g);
/// Rank-2 chart over R with rho_1 = d/dx, rho_2 = s x d/dx, [e_1, e_2] = e_1.
/// Almost Lie exactly when s = 1.
SkewAlgebroidChart affine_line_chart(double s = 1.0);
/// Chart from polynomial structure functions and anchors.
SkewAlgebroidChart polynomial_chart(int m, int r, const std::vector<std::vector<std::vector<Polynomial>>>& c,
                                    const std::vector<std::vector<Polynomial>>& rho);

}  // namespace loopoid
