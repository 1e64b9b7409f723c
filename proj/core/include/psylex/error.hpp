#pragma once

#include <stdexcept>
#include <string>

namespace psylex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Bad arguments or configuration supplied by the caller; the CLI maps
/// these to usage errors (exit code 2) instead of pipeline failures.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(message) {}
};

}  // namespace psylex
