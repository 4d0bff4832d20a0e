#include "loopoid/core.hpp"

namespace loopoid {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTable: return "MalformedTable";
    case ErrorCode::NotTransversal: return "NotTransversal";
    case ErrorCode::NotSubgroup: return "NotSubgroup";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NumericalNoise: return "NumericalNoise";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::NotComposable: return "NotComposable";
    case ErrorCode::SamplerExhausted: return "SamplerExhausted";
    case ErrorCode::NotOdd: return "NotOdd";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::NotSubmersion: return "NotSubmersion";
    case ErrorCode::EmptyFiber: return "EmptyFiber";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotOnFiber: return "NotOnFiber";
    case ErrorCode::FrameSingular: return "FrameSingular";
    case ErrorCode::RankNotConstant: return "RankNotConstant";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::JetNotVanishing: return "JetNotVanishing";
    case ErrorCode::IncompatibleVelocities: return "IncompatibleVelocities";
    case ErrorCode::SectionFailure: return "SectionFailure";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace loopoid
