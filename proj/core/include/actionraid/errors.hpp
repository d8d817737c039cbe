#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace actionraid {

/// Base of every error thrown by the library. `error_class()` is a short
/// machine-parsable tag that the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view error_class() const noexcept = 0;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "invalid-input"; }
};

/// Calling an operation in a state that does not allow it (e.g. step after done).
class ProtocolError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "protocol"; }
};

/// Malformed or mismatched binary file / snapshot bytes.
class FormatError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "format"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "config"; }
};

}  // namespace actionraid
