#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

enum class ErrorKind {
  invalid_argument,
  resolution,
  inconsistent_discretization,
  resource,
  domain,
  stiffness,
  configuration,
  tracking_lost,
  numerical,
  convergence,
  fit_window,
  ill_conditioned_speed,
  window_too_small,
  diagnostic,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace frontlab
