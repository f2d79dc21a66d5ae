#pragma once

#include <stdexcept>
#include <string>

namespace histofeat {

enum class ErrorKind {
  Io,
  Format,
  Layout,
  EmptyClass,
  Stratification,
  Domain,
  Config,
  DegenerateImage,
  Shape,
  Alignment,
  Bank,
  Training,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// precondition or I/O contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace histofeat
