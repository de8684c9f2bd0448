#pragma once

#include <stdexcept>
#include <string>

namespace bidisk {

/// Argument outside the domain of an operation (non-interior point, point on a cut, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid construction input or user configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical inconsistency that invalidates a result: a log branch jump, or
/// disagreeing derivative routes.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bidisk
