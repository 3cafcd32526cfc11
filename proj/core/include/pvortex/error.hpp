#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvortex {

enum class ErrorKind {
  InvalidArgument,
  NoConvergence,
  SingularConfiguration,
  NotNormalized,
  StepFailure,
  BudgetExceeded,
  DomainExit,
  NonTransversal,
  LiftAmbiguity,
  RayRootNotBracketed,
  GradientVanishes,
  NotPositiveDefinite,
  CannotCertify,
  SeparationOutOfRange,
  SingularJacobian,
  NoDecrease,
  InsufficientFamily,
};

std::string_view to_string(ErrorKind kind);

/// Typed failure raised by every module. `value()` carries the quantity the
/// failure is about (exit time, best margin, residual, offending angle...),
/// `stage()` names the pipeline stage where it is meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = 0.0,
        std::string stage = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        value_(value),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  double value_;
  std::string stage_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularConfiguration: return "SingularConfiguration";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::LiftAmbiguity: return "LiftAmbiguity";
    case ErrorKind::RayRootNotBracketed: return "RayRootNotBracketed";
    case ErrorKind::GradientVanishes: return "GradientVanishes";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::CannotCertify: return "CannotCertify";
    case ErrorKind::SeparationOutOfRange: return "SeparationOutOfRange";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NoDecrease: return "NoDecrease";
    case ErrorKind::InsufficientFamily: return "InsufficientFamily";
  }
  return "Unknown";
}

}  // namespace pvortex
