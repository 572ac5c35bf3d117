#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwassoc {

// Bad input that the caller could have checked up front. The CLI maps
// ParseError, ConfigError and std::invalid_argument to exit code 2 and
// NumericalError / ClassificationError to exit code 3.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

  ParseError(const std::string& file, std::size_t line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), line_(line), message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No state of the requested kind (e.g. a trap level) could be identified.
class ClassificationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

} // namespace mwassoc
