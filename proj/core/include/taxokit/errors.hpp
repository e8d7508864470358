#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taxokit {

// Error classes map onto CLI exit codes: ConfigError -> 1, DataError -> 2,
// anything else -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or usage (bad parameter ranges, malformed config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid or missing input data (schema violations, missing artifacts,
// inconsistent inputs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Schema violation in an input file, with location.
class ParseError : public DataError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& field,
             const std::string& message)
      : DataError(file + ":" + std::to_string(line) + ": field '" + field +
                  "': " + message),
        file_(file),
        line_(line),
        field_(field) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

}  // namespace taxokit
