// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace superloc {

// Numeric values double as the CLI exit codes.
enum class ErrorKind : int {
  kValidation = 1,
  kMathDomain = 2,
  kNonConvergence = 3,
};

// Every failure names the invariant that was violated so callers (and the
// CLI) can report it in machine-readable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string invariant, const std::string& message)
      : std::runtime_error(message), kind_(kind), invariant_(std::move(invariant)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& invariant() const { return invariant_; }

 private:
  ErrorKind kind_;
  std::string invariant_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& message)
      : Error(ErrorKind::kValidation, std::move(invariant), message) {}
};

class MathDomainError : public Error {
 public:
  MathDomainError(std::string invariant, const std::string& message)
      : Error(ErrorKind::kMathDomain, std::move(invariant), message) {}
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string invariant, const std::string& message)
      : Error(ErrorKind::kNonConvergence, std::move(invariant), message) {}
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kMathDomain: return "math-domain";
    case ErrorKind::kNonConvergence: return "non-convergence";
  }
  return "unknown";
}

}  // namespace superloc
