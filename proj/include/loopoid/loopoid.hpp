#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loopoid/core.hpp"
#include "loopoid/newton.hpp"
#include "loopoid/polynomial.hpp"
#include "loopoid/random.hpp"
#include "loopoid/smooth_loop.hpp"

namespace loopoid {

/// Coordinate-chart model of a quasiloopoid G => M. Points of G live in
/// R^dim_g, points of M in R^dim_m; unit embeds M into G.
struct ChartedQuasiloopoid {
  int dim_g = 0;
  int dim_m = 0;
  UnaryMap alpha;
  UnaryMap beta;
  UnaryMap unit;
  BinaryMap mul;
  UnaryMap inverse;       // two-sided, optional
  UnaryMap left_inverse;  // optional, i_l(g) (g h) = h
  double composable_tol = 1e-9;
  double fd_step = 1e-5;
  double sample_radius = 0.3;
  bool claims_loopoid = false;
  bool claims_ip = false;
  std::string name;

  int rank() const { return dim_g - dim_m; }
};

double composable_gap(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h);
bool composable(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h);
/// Throws NotComposable.
Vec multiply(const ChartedQuasiloopoid& Q, const Vec& g, const Vec& h);

Mat alpha_jacobian(const ChartedQuasiloopoid& Q, const Vec& g);
Mat beta_jacobian(const ChartedQuasiloopoid& Q, const Vec& g);
Mat unit_jacobian(const ChartedQuasiloopoid& Q, const Vec& u);

/// Moves g onto the fiber side(g) = target with minimum-norm Newton steps.
/// Throws NotOnFiber when the projection fails.
Vec snap_to_fiber(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g, const Vec& target);

/// Random point of M in the sampling box and a random element of G near it.
Vec sample_base_point(const ChartedQuasiloopoid& Q, CounterRng& rng);
Vec sample_element(const ChartedQuasiloopoid& Q, CounterRng& rng);
/// Random h with alpha(h) = beta(g) (or beta(h) = alpha(g) for Anchor::Beta).
/// Throws SamplerExhausted after repeated projection failures.
Vec sample_composable(const ChartedQuasiloopoid& Q, const Vec& g, Anchor side, CounterRng& rng);

struct AxiomReport {
  int samples = 0;
  double unit_section_residual = 0.0;  // alpha(eps(u)) - u, beta(eps(u)) - u
  double unit_law_residual = 0.0;      // g eps(beta g) - g, eps(alpha h) h - h
  int min_alpha_rank = 0;
  int min_beta_rank = 0;
  double unities_assoc_residual = 0.0;  // (xy)z - x(yz), one factor a unit, gaps included
  double anchor_alpha_residual = 0.0;   // alpha(gh) - alpha(g)
  double anchor_beta_residual = 0.0;    // beta(gh) - beta(h)
  double min_left_translation_sv = 0.0;
  double min_right_translation_sv = 0.0;
  std::optional<double> ip_residual;             // g^-1 (g h) - h, (h g) g^-1 - h
  std::optional<double> ip_identities_residual;  // g g^-1 = eps(alpha g), ...
  std::optional<double> left_ip_residual;
  double tol = 1e-8;
  bool quasiloopoid = false;
  bool unities_associative = false;
  bool anchor_morphism = false;
  bool loopoid = false;
  bool inverse_property = false;
  bool left_inverse_property = false;
  std::string global_injectivity = "not checked";
};

AxiomReport check_axioms(const ChartedQuasiloopoid& Q, int samples, CounterRng& rng, double tol = 1e-8);

/// G = L x R^n x R^n over M = R^n with alpha(x,s,t) = s, beta(x,s,t) = t,
/// eps(s) = (e,s,s) and (x,s,t)(y,t,r) = (xy,s,r).
ChartedQuasiloopoid product_loopoid(const SmoothLoopChart& L, int n);
/// M x M => M.
ChartedQuasiloopoid pair_groupoid(int n);
/// A loop as a loopoid over a point.
ChartedQuasiloopoid loop_as_loopoid(const SmoothLoopChart& L);

struct PhiFunction {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;  // optional, finite differences otherwise
  std::string name;
};

PhiFunction phi_from_polynomial(const Polynomial& p);

/// The submanifold a1 - a2 = phi(b1 - b2) of R^2 x R^2 over the diagonal,
/// stored in coordinates (a1, b1, b2). Throws NotOdd or NotMonotone.
ChartedQuasiloopoid phi_quasiloopoid(const PhiFunction& phi, int samples = 64, std::uint64_t seed = 0);

/// Fibration P -> M given by pi and a global fiber chart: lift(pi(p), fiber(p)) = p.
struct FibrationChart {
  int dim_p = 0;
  int dim_m = 0;
  UnaryMap pi;
  BinaryMap lift;  // (m, f) -> p
  UnaryMap fiber;  // p -> f
  std::string name;

  int fiber_dim() const { return dim_p - dim_m; }
};

FibrationChart trivial_fibration(int dim_m, int fiber_dim);
/// pi(m, f) = m + 1/2 |f|^2 (1, ..., 1), a nonlinear submersion.
FibrationChart sheared_fibration(int dim_m, int fiber_dim);

/// Carrier {(p,g,p') : pi(p) = alpha(g), beta(g) = pi(p')} in coordinates
/// (fiber(p), g, fiber(p')). Throws NotSubmersion.
ChartedQuasiloopoid prolongation_loopoid(const ChartedQuasiloopoid& Q, const FibrationChart& pi);

enum class SliceKind { Pseudoinverse, UnitTangent };

struct LocalSection {
  Anchor side = Anchor::Alpha;
  Vec base;     // side(through)
  Vec through;  // the element the section passes through
  Mat slice;    // dim_g x dim_m; s(q) = through + slice z(q)
  UnaryMap map;
};

/// Local alpha- or beta-section through g. Pseudoinverse slices along the
/// pseudoinverse of the side Jacobian, UnitTangent along T eps.
/// Evaluating the section throws NoConvergence if the projection fails.
LocalSection build_local_section(const ChartedQuasiloopoid& Q, Anchor side, const Vec& g,
                                 SliceKind kind = SliceKind::Pseudoinverse);

struct IsotropyReport {
  Vec u;
  std::vector<Vec> samples;
  int failures = 0;
  double fiber_residual = 0.0;    // alpha(g) - u, beta(g) - u over samples
  double closure_residual = 0.0;  // products and inverses staying in the double fiber
};

/// Throws EmptyFiber when no sample can be projected.
IsotropyReport isotropy_samples(const ChartedQuasiloopoid& Q, const Vec& u, int n, CounterRng& rng);

}  // namespace loopoid
