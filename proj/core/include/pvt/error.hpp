#pragma once

#include <stdexcept>
#include <string>

namespace pvt {

enum class ErrorKind {
  OutOfValidityBox,
  PositivityViolation,
  NonPositiveCubic,
  InvalidArgument,
  NoStableRoot,
  NotCritical,
  NoSignChange,
  NoConvergence,
  SingularJacobian,
  NoFoldInWindow,
  BranchMissing,
  NotFirstOrder,
  NotSecondOrder,
  StepSizeUnderflow,
  CflViolation,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is reported through this type;
/// callers dispatch on kind() (the CLI maps it to exit codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OutOfValidityBox: return "OutOfValidityBox";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::NonPositiveCubic: return "NonPositiveCubic";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoStableRoot: return "NoStableRoot";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NoFoldInWindow: return "NoFoldInWindow";
    case ErrorKind::BranchMissing: return "BranchMissing";
    case ErrorKind::NotFirstOrder: return "NotFirstOrder";
    case ErrorKind::NotSecondOrder: return "NotSecondOrder";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace pvt
