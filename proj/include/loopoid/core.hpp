#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopoid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Point maps on coordinate charts.
using UnaryMap = std::function<Vec(const Vec&)>;
using BinaryMap = std::function<Vec(const Vec&, const Vec&)>;

// c[k](i, j): coefficient of e_k in [e_i, e_j].
using StructureTensor = std::vector<Mat>;

enum class ErrorCode {
  MalformedTable,
  NotTransversal,
  NotSubgroup,
  NotAutomorphism,
  DivisionByZero,
  DomainError,
  NoConvergence,
  SingularJacobian,
  NumericalNoise,
  NotAntisymmetric,
  NotComposable,
  SamplerExhausted,
  NotOdd,
  NotMonotone,
  NotSubmersion,
  EmptyFiber,
  RankDeficient,
  NotOnFiber,
  FrameSingular,
  RankNotConstant,
  NotClosed,
  JetNotVanishing,
  IncompatibleVelocities,
  SectionFailure,
  SchemaError,
  UsageError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Side { Left, Right };
enum class Anchor { Alpha, Beta };

inline StructureTensor zero_structure(int n) {
  return StructureTensor(static_cast<std::size_t>(n), Mat::Zero(n, n));
}

}  // namespace loopoid
