#pragma once

#include <stdexcept>
#include <string>

namespace sievemoments {

// Error categories map one-to-one onto the C API status codes and the CLI
// exit codes (usage -> 2, scale/cap -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or parameter violation.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input is valid but the requested computation exceeds a configured cap.
class ScaleError : public Error {
 public:
  using Error::Error;
};

// Mathematical domain violation (pole, divergent integral).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Allocation failure or similar resource exhaustion.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sievemoments
