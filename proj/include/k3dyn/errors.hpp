#pragma once

#include <stdexcept>
#include <string>

namespace k3dyn {

// Each kind maps to a distinct process exit code in the CLI.
enum class ErrorKind {
  invalid_argument = 2,
  not_symmetric = 3,
  precondition = 4,
  not_negative_definite = 5,
  unsupported = 6,
  degenerate_fiber = 7,
  singular_point = 8,
  chart_failure = 9,
  estimator = 10,
  config = 11,
  io = 12,
  invariant_violation = 13,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace k3dyn
