#pragma once

#include <stdexcept>
#include <string>

namespace ethlab {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class TooFewLevels : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class InsufficientStates : public Error {
 public:
  using Error::Error;
};

class InvalidCut : public Error {
 public:
  using Error::Error;
};

class SupportNotCovered : public Error {
 public:
  using Error::Error;
};

}  // namespace ethlab
