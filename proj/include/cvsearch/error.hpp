#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvsearch {

enum class ErrorKind {
  InvalidParameter,
  EmptyWindow,
  ConstraintViolation,
  DegenerateInstance,
  NumericalRank,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cvsearch
