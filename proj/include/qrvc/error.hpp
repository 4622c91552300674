#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrvc {

enum class ErrorCode {
  NotPrime,
  EvenPrime,
  TooSmall,
  IndexNotDividing,
  ModulusMismatch,
  WidthOverflow,
  EmptyFold,
  NTooLarge,
  LengthMismatch,
  Infeasible,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type;
// code() names the failing precondition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qrvc
