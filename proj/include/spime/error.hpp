#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spime {

/// Malformed text input (hex operands, job files, catalogs). Carries the
/// 1-based line number when the input is line-oriented, 0 otherwise.
class ParseError : public std::invalid_argument {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Configuration or shape violations (empty array, job/config mismatch,
/// nonpositive model parameters, uncalibrated devices).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace spime
