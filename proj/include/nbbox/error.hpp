#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbbox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violated a documented precondition (non-finite coordinate,
/// non-positive size, malformed polygon, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A random range with a > c (integers) or a >= c (reals).
class InvalidRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidConfig : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Text input that does not follow the expected file format. Carries the
/// source name, 1-based line number and the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::string field, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " +
              (field.empty() ? std::string() : "field '" + field + "': ") + what),
        source_(std::move(source)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

}  // namespace nbbox
