#pragma once

#include <optional>
#include <string>

#include "loopoid/core.hpp"
#include "loopoid/newton.hpp"
#include "loopoid/polynomial.hpp"
#include "loopoid/random.hpp"

namespace loopoid {

/// Antisymmetric bilinear bracket on R^n, s[k](i, j) = -s[k](j, i).
struct SkewAlgebra {
  int dim = 0;
  StructureTensor s;

  Vec bracket(const Vec& x, const Vec& y) const;
};

/// Local smooth loop on a chart of R^n.
class SmoothLoopChart {
 public:
  SmoothLoopChart() = default;
  SmoothLoopChart(int dim, Vec unit, BinaryMap mul, double fd_step = 1e-5);

  int dim() const { return dim_; }
  const Vec& unit() const { return unit_; }
  double fd_step() const { return fd_step_; }
  const BinaryMap& mul() const { return mul_; }

  /// Points farther than the radius from the unit raise DomainError.
  std::optional<double> validity_radius;
  /// Two-sided inverse satisfying the inverse property, when the loop has one.
  UnaryMap inverse;
  std::string name;

  Vec operator()(const Vec& x, const Vec& y) const { return mul_(x, y); }

 private:
  int dim_ = 0;
  Vec unit_;
  BinaryMap mul_;
  double fd_step_ = 1e-5;
};

Vec eval_mul(const SmoothLoopChart& L, const Vec& x, const Vec& y);

/// Left: x with a x = b. Right: y with y a = b. Newton from b - a + e.
Vec divide(const SmoothLoopChart& L, Side side, const Vec& a, const Vec& b,
           const NewtonOptions& opts = {});

struct StructureConstants {
  StructureTensor c;  // c[k](i, j) = d^2 (x y)^k / dx^i dy^j at (e, e)
  SkewAlgebra algebra;
  double noise = 0.0;  // max change of the skew part between steps h and 2h
};

/// Throws NumericalNoise when the two-step comparison exceeds noise_tol.
StructureConstants extract_structure_constants(const SmoothLoopChart& L, double noise_tol = 1e-4);

/// x y = x + y + 1/2 [x, y]. Throws NotAntisymmetric.
SmoothLoopChart bracket_loop(int dim, const StructureTensor& bracket);
SmoothLoopChart polynomial_loop(const BiPolynomialMap& mul, Vec unit);
SmoothLoopChart abelian_loop(int dim);
/// (x1 + y1 + x1 y2, x2 + y2 + x2 y1) with unit 0, the two-dimensional loop H
/// whose bracket is [X1, X2] = X1 - X2.
SmoothLoopChart h_loop();
/// Invertible octonions in the coordinates of their 8 components; unit e0.
SmoothLoopChart octonion_loop();

struct LoopChartReport {
  double unit_residual = 0.0;
  double min_left_translation_sv = 0.0;
  double min_right_translation_sv = 0.0;
  double inverse_residual = 0.0;  // g^-1 (g h) - h and (h g) g^-1 - h, if an inverse is set
  bool ok = false;
};

/// Samples points within radius of the unit.
LoopChartReport check_loop_chart(const SmoothLoopChart& L, int samples, CounterRng& rng,
                                 double radius = 0.3);

/// Residual of the Mal'cev identity on random triples.
double malcev_residual(const SkewAlgebra& A, int samples, CounterRng& rng);

/// Jacobi identity residual on random triples.
double jacobi_residual(const SkewAlgebra& A, int samples, CounterRng& rng);

StructureTensor random_antisymmetric(int dim, CounterRng& rng, double lo = -1.0, double hi = 1.0);

}  // namespace loopoid
