#pragma once

#include <stdexcept>
#include <string>

namespace mforge {

enum class ErrorCode {
  InvalidArgument,
  Cycle,
  DuplicateElement,
  UnknownPoint,
  RoleViolation,
  InvalidQuasiLens,
  NotMonotone,
  CarrierMismatch,
  KindViolation,
  NotStrict,
  NotModular,
  NegativeWeight,
  MalformedConstraint,
  EmptyInput,
  TypeMismatch,
  Parse,
  Schema,
  Unsupported,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mforge
