#pragma once

#include <stdexcept>
#include <string>

namespace mshom {

// Bad inputs: rejected preconditions, malformed configs. CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failures: solver breakdown, NaN states. CLI exit code 2.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mshom
