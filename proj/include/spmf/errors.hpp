#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spmf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a format or domain invariant. When the problem is
/// tied to a line of an input file, `line()` is the 1-based line number.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller-supplied parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experience is undefined for a user with no ratings in the domain.
class UndefinedExperience : public Error {
 public:
  using Error::Error;
};

/// Prediction requested for a user or item the model was not trained on.
class ColdStart : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite objective.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// A saved model file is corrupt, truncated, or from an unsupported version.
class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace spmf
