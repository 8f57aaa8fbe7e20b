#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace segsim {

/// A caller violated an operation's precondition (bad coordinate, negative radius, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid run or sweep configuration. Reported before any simulation work starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed region-raster text. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that breaks a structural rule (region id range, missing region).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More households requested than a region (or the whole map) can hold.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace segsim
