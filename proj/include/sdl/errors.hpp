#pragma once

#include <stdexcept>
#include <string>

namespace sdl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected parameters or malformed configuration.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Malformed input file (bad magic bytes, truncated payload, unparsable CSV).
class FormatError : public InvalidConfig {
 public:
  using InvalidConfig::InvalidConfig;
};

// Adaptive quadrature did not reach its tolerance within the refinement limit.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// A root could not be bracketed; usually signals floating-point underflow.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

// Argument outside the state space of a diffusion, or outside the range of
// its space transform.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdl
