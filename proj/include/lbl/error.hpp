#pragma once

#include <stdexcept>
#include <string>

namespace lbl {

/// Argument outside the physical domain of an operation (T <= 0, negative width, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration or parameter set that cannot be evaluated.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File or stream could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lbl
