#pragma once

#include <stdexcept>
#include <string>

namespace puckpar {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by user-supplied input (files, flags, data). The CLI maps
// these to exit code 2; everything else derived from Error maps to 1.
class InputError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedVersionError : public InputError {
 public:
  using InputError::InputError;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class UndefinedLabelError : public Error {
 public:
  using Error::Error;
};

class TrainingDivergedError : public Error {
 public:
  using Error::Error;
};

}  // namespace puckpar
