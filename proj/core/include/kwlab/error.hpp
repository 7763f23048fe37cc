#pragma once

#include <stdexcept>
#include <string>

namespace kwlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Raised when a requested accuracy cannot be certified with the available tables.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

class UnknownExperimentError : public Error {
 public:
  using Error::Error;
};

}  // namespace kwlab
