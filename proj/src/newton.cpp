#include "loopoid/newton.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "loopoid/numdiff.hpp"

namespace loopoid {

namespace {

struct StepInfo {
  Vec dx;
  int rank = 0;
  double condition = 0.0;
};

StepInfo min_norm_step(const Mat& J, const Vec& r, double rank_tol) {
  StepInfo info;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(J);
  cod.setThreshold(rank_tol);
  info.dx = -cod.solve(r);
  info.rank = static_cast<int>(cod.rank());
  Eigen::JacobiSVD<Mat> svd(J);
  const auto& s = svd.singularValues();
  const Eigen::Index full = std::min(J.rows(), J.cols());
  if (s.size() == 0) {
    info.condition = 1.0;
  } else if (s[full - 1] <= 0.0) {
    info.condition = std::numeric_limits<double>::infinity();
  } else {
    info.condition = s[0] / s[full - 1];
  }
  return info;
}

}  // namespace

NewtonReport newton_iterate(const UnaryMap& residual, Vec x0, const NewtonOptions& opts,
                            const JacobianMap& jacobian) {
  NewtonReport rep;
  rep.x = std::move(x0);
  Vec r = residual(rep.x);
  rep.residual = r.norm();
  for (int it = 0; it < opts.max_iter; ++it) {
    if (!std::isfinite(rep.residual)) break;
    if (rep.residual < opts.tol) {
      rep.converged = true;
      return rep;
    }
    const Mat J = jacobian ? jacobian(rep.x) : numdiff::jacobian(residual, rep.x, opts.fd_step);
    const StepInfo step = min_norm_step(J, r, opts.rank_tol);
    rep.rank = step.rank;
    rep.condition = step.condition;
    double t = 1.0;
    Vec trial = rep.x + step.dx;
    Vec r_trial = residual(trial);
    if (opts.damping) {
      while (!(r_trial.norm() < rep.residual) && t > 1e-4) {
        t *= 0.5;
        trial = rep.x + t * step.dx;
        r_trial = residual(trial);
      }
    }
    rep.x = std::move(trial);
    r = std::move(r_trial);
    rep.residual = r.norm();
    rep.iterations = it + 1;
  }
  rep.converged = rep.residual < opts.tol;
  return rep;
}

NewtonReport newton_solve(const UnaryMap& residual, Vec x0, const NewtonOptions& opts,
                          const JacobianMap& jacobian) {
  NewtonReport rep = newton_iterate(residual, std::move(x0), opts, jacobian);
  if (rep.converged) return rep;
  char buf[160];
  const int full = static_cast<int>(std::min<Eigen::Index>(residual(rep.x).size(), rep.x.size()));
  if (rep.iterations > 0 && rep.rank < full) {
    std::snprintf(buf, sizeof buf, "rank %d of %d, condition %.3g, residual %.3g", rep.rank, full,
                  rep.condition, rep.residual);
    throw Error(ErrorCode::SingularJacobian, buf);
  }
  std::snprintf(buf, sizeof buf, "no convergence after %d iterations, residual %.3g",
                rep.iterations, rep.residual);
  throw Error(ErrorCode::NoConvergence, buf);
}

}  // namespace loopoid
