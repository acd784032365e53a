#pragma once
#include <stdexcept>
#include <string>

namespace ssd {

enum class ErrorCode {
  // numerics
  SingularPoint,
  NonFinite,
  SingularOnPath,
  StepUnderflow,
  NoMinimum,
  InvalidArgument,
  // construct
  AsymptoteMismatch,
  NonCancellation,
  BadZero,
  BadSingularity,
  ZeroAmplitude,
  NoCollision,
  SineOutOfRange,
  NodeConditionViolated,
  ConstraintViolated,
  BranchAmbiguity,
  DegenerateLeadingCoefficient,
  InconsistentPotential,
  // scatter
  TailTooFat,
  ExactZero,
  AmbiguousOrder,
  PoleAtK1,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularOnPath: return "SingularOnPath";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoMinimum: return "NoMinimum";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AsymptoteMismatch: return "AsymptoteMismatch";
    case ErrorCode::NonCancellation: return "NonCancellation";
    case ErrorCode::BadZero: return "BadZero";
    case ErrorCode::BadSingularity: return "BadSingularity";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::NoCollision: return "NoCollision";
    case ErrorCode::SineOutOfRange: return "SineOutOfRange";
    case ErrorCode::NodeConditionViolated: return "NodeConditionViolated";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::InconsistentPotential: return "InconsistentPotential";
    case ErrorCode::TailTooFat: return "TailTooFat";
    case ErrorCode::ExactZero: return "ExactZero";
    case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorCode::PoleAtK1: return "PoleAtK1";
  }
  return "Unknown";
}

/// Construction and numerics failures. The code names the failed contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const char* name() const noexcept { return error_name(code_); }

  bool is_construction_error() const noexcept {
    return code_ >= ErrorCode::AsymptoteMismatch && code_ <= ErrorCode::InconsistentPotential;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ssd
