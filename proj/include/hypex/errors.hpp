#pragma once

#include <stdexcept>
#include <string>

namespace hypex {

// Base of every error raised by the library. The CLI maps each leaf type
// onto a process exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: negative weights, mismatched alphabets, bad ranges.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Two hypotheses that cannot be separated (p1 == p2, empty support overlap).
class DegenerateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A constraint that no admissible value satisfies (empty Pi_n, unreachable
// mean energy).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Enumeration cap exceeded or an exact integer no longer fits.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// Root finding that failed to bracket or converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypex
