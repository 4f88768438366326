#pragma once

#include <stdexcept>
#include <string>

namespace spsforge {

enum class ErrorCode {
  kInvalidArgument,
  kTooLarge,
  kUnknownElement,
  kCycleDetected,
  kNotTransitivelyReduced,
  kNoBounds,
  kNotALattice,
  kNotPlanar,
  kInconsistentRotation,
  kCellNotFound,
  kInternalInvariantViolation,
  kNotSPS,
  kInvalidTarget,
  kParseError,
  kValidationError,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code), cause_(code) {}
  Error(ErrorCode code, ErrorCode cause, const std::string& message)
      : std::runtime_error(message), code_(code), cause_(cause) {}

  ErrorCode code() const { return code_; }
  /// The core error behind a wrapped one; equal to code() otherwise.
  ErrorCode cause() const { return cause_; }

 private:
  ErrorCode code_;
  ErrorCode cause_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace spsforge
