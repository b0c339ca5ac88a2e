#ifndef REVMINE_ERRORS_HPP
#define REVMINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace revmine {

/// Malformed or inconsistent input data (bad spans, unknown annotators, ...).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax-level failure while reading a file; carries a 1-based line number.
class ParseError : public DataError {
public:
  ParseError(const std::string& msg, std::size_t line)
      : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Invalid configuration or unusable combination of options.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace revmine

#endif  // REVMINE_ERRORS_HPP
