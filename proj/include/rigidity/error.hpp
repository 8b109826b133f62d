#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rigidity {

enum class ErrorKind {
  InvalidArgument,
  FieldMismatch,
  ZeroInput,
  Singular,
  NotConverged,
  AmbientMismatch,
  NotContained,
  SizeMismatch,
  ChainMismatch,
  ShapeMismatch,
  IllegalPermutation,
  DegenerateConfiguration,
  NotSemilinear,
  DegenerateOracle,
  InternalInconsistency,
  ConfigError,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ChainMismatch: return "ChainMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IllegalPermutation: return "IllegalPermutation";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::NotSemilinear: return "NotSemilinear";
    case ErrorKind::DegenerateOracle: return "DegenerateOracle";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rigidity
