#pragma once

#include <stdexcept>
#include <string>

namespace lrv {

// Invalid user configuration: bad sizes, bandwidths out of range, unknown names.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (e.g. lag |k| >= T).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation produced a non-finite or otherwise unusable value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kernel has no finite characteristic exponent q (truncated kernel), so
// plug-in bandwidth formulas do not apply.
class NoFiniteSmoothness : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace lrv
