#pragma once

#include <stdexcept>
#include <string>

namespace arng {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (negative temperature,
// mismatched grids, probabilities outside [0,1], ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The data set is too small for the requested estimate.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Inputs are individually valid but mutually inconsistent
// (e.g. unmixing yields a negative flux).
class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

// Malformed file contents: bad magic, unsupported version, truncated records.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Configuration problem tied to a specific field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace arng
