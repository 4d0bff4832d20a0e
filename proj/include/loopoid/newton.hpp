#pragma once

#include <functional>
#include <optional>

#include "loopoid/core.hpp"

namespace loopoid {

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-10;
  bool damping = false;
  double fd_step = 1e-6;
  // Relative singular-value threshold for the rank estimate.
  double rank_tol = 1e-10;
};

struct NewtonReport {
  Vec x;
  double residual = 0.0;
  int iterations = 0;
  int rank = 0;
  double condition = 0.0;
  bool converged = false;
};

using JacobianMap = std::function<Mat(const Vec&)>;

/// Solves F(x) = 0 by Newton iteration with minimum-norm steps, so square,
/// over- and under-determined systems are all accepted. Does not throw; the
/// report carries the last iterate.
NewtonReport newton_iterate(const UnaryMap& residual, Vec x0, const NewtonOptions& opts,
                            const JacobianMap& jacobian = {});

/// Like newton_iterate but throws NoConvergence, or SingularJacobian when
/// the last Jacobian was rank deficient, if the residual stays above tol.
NewtonReport newton_solve(const UnaryMap& residual, Vec x0, const NewtonOptions& opts,
                          const JacobianMap& jacobian = {});

}  // namespace loopoid
