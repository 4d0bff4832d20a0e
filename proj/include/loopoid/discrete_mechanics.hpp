#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopoid/core.hpp"
#include "loopoid/lie_functor.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/newton.hpp"
#include "loopoid/polynomial.hpp"

namespace loopoid {

struct DiscreteLagrangianSystem {
  ChartedQuasiloopoid loopoid;
  ScalarField L;
  NewtonOptions newton;
  double fd_step = 1e-5;
  std::string name;
};

struct Trajectory {
  std::vector<Vec> points;
  std::vector<double> residuals;        // |alpha(h) - beta(g); DL(g, h)| per step
  std::vector<double> composable_gaps;  // |beta(g_i) - alpha(g_i+1)|
};

/// DL(g, h)_i = left X_i(L)(g) - right X_i(L)(h) with the frame at beta(g).
/// Throws NotComposable.
Vec el_residual(const DiscreteLagrangianSystem& S, const Vec& g, const Vec& h);

/// Solves alpha(h) = beta(g), DL(g, h) = 0 for h by minimum-norm Newton from
/// eps(beta(g)) or the given seed. Throws NoConvergence or SingularJacobian.
Vec step_solve(const DiscreteLagrangianSystem& S, const Vec& g,
               const std::optional<Vec>& branch_seed = std::nullopt);

/// n steps from g0, so n + 1 points. Step failures are rethrown with the
/// step index in the message.
Trajectory trajectory(const DiscreteLagrangianSystem& S, const Vec& g0, int n,
                      const std::optional<Vec>& branch_seed = std::nullopt);

enum class LegendreSide { Plus, Minus };

/// F+L(g)_i = left X_i(L)(g) in the dual frame at beta(g); F-L(g)_i =
/// right X_i(L)(g) at alpha(g). Differentiates L along the prolonged curves.
Vec legendre(const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g);
Vec legendre(const FrameField& F, const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g);

/// |F+-L(g) - cotangent_fibration(dL(g))|, the two routes to the transform.
double legendre_cross_check(const DiscreteLagrangianSystem& S, LegendreSide side, const Vec& g);

struct RegularityReport {
  Vec u;
  int probes = 0;
  double min_fiber_sv_plus = 0.0;   // r x r Jacobian of F+L along alpha-vertical directions
  double min_fiber_sv_minus = 0.0;  // same for F-L along beta-vertical directions
  double full_chart_sv = 0.0;       // g -> (beta(g), F+L(g)) at eps(u)
  Mat plus_directional;             // r x dim_g, d/dt F+L(eps(u) + t e_j)
  Mat minus_directional;
  double flow_matching_residual = 0.0;  // |F-L(step_solve(g)) - F+L(g)| over probes
  int flow_matching_failures = 0;       // probes where step_solve failed
  double threshold = 1e-6;
  bool regular = false;
  bool minus_regular = false;
};

RegularityReport regularity_check(const DiscreteLagrangianSystem& S, const Vec& u, double probe_radius,
                                  int probes = 8, std::uint64_t seed = 0);

/// max over consecutive pairs of |F-L(g_i+1) - F+L(g_i)|.
double flow_matching_residual(const DiscreteLagrangianSystem& S, const Trajectory& t);

/// H x R^2 x R^2 over R^2 with L = sum x_i^2 / 2.
DiscreteLagrangianSystem h_kinetic_system();
/// Pair groupoid R^n x R^n with L(u, v) = |v - u|^2 / 2.
DiscreteLagrangianSystem free_particle_system(int n);

}  // namespace loopoid
