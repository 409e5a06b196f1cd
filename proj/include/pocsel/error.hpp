#pragma once

#include <stdexcept>
#include <string>

namespace pocsel {

// Every error raised by the library carries the name of the module it came
// from so that the CLI can report "<module>: <message>".
class Error : public std::runtime_error {
public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

private:
  std::string module_;
};

/// Malformed input file or row.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& message) : Error("cli_io", message) {}
};

/// Invalid run configuration (bad flags, missing or duplicate columns).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& message) : Error("cli_io", message) {}
};

}  // namespace pocsel
