/// @file errors.hpp
/// @brief Error taxonomy shared by every module; the CLI maps kinds to JSON.

#pragma once

#include <stdexcept>
#include <string>

namespace tdk {

enum class ErrorKind {
  InvalidParameters,  // model constants out of range, non-hyperbolic equilibrium
  Domain,             // rate/bound queries outside their validity region
  Shape,              // mismatched grids or field counts
  Numeric,            // NaN/Inf encountered, non-positive values where positives required
  StateValidity,      // density/k floor breached (vacuum-adjacent state)
  Resolution,         // requested initial data unreachable on the given grid
  Truncation,         // quadrature tail mass above tolerance
  InsufficientData,   // too few samples / window shorter than required
  Io,                 // file system failures
  Parse,              // config text rejected
  AbortedRun,         // instability detector tripped mid-run
  Usage,              // malformed command line
};

const char* error_kind_name(ErrorKind kind);

/// Single exception type; `kind()` is machine-readable, what() is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace tdk
