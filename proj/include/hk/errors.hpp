#pragma once

#include <stdexcept>
#include <string>

namespace hk {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed caller input. The CLI maps all of these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class LengthError : public InputError {
 public:
  using InputError::InputError;
};

class NonPositiveWeight : public InputError {
 public:
  using InputError::InputError;
};

class NonPositiveArgument : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedDimension : public InputError {
 public:
  using InputError::InputError;
};

class InvalidParameter : public InputError {
 public:
  using InputError::InputError;
};

/// Raised by the damped Newton solver; carries the iteration count reached.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace hk
