#pragma once

#include <stdexcept>
#include <string>

namespace scat {

/// Base class for all library errors. `exit_code()` maps onto the CLI contract:
/// 1 I/O, 2 usage or validation, 3 numeric failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

/// Malformed or foreign binary file (bad magic, version, truncated payload).
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace scat
