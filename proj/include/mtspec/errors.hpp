#pragma once

#include <stdexcept>
#include <string>

namespace mtspec {

// Invalid argument or configuration supplied by the caller. CLI exit code 1.
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed (e.g. an eigensolver did not converge).
// CLI exit code 2.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtspec
