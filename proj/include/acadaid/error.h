#ifndef ACADAID_ERROR_H_
#define ACADAID_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acadaid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input record. Carries the 1-based line (or record) number.
class ParseError : public Error {
 public:
  ParseError(const std::string &source, std::size_t line,
             const std::string &what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Caller violated a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Optimizer diverged or the training data cannot be fitted.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// A required artifact is not loaded.
class UnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace acadaid

#endif  // ACADAID_ERROR_H_
