#pragma once

#include <stdexcept>
#include <string>

namespace omega_lab {

/// Input outside the mathematical domain of an operation (bound < 2, x = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input exceeds a documented implementation cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A caller-side contract was violated (e.g. a base prime table too small).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed or mismatched cache file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omega_lab
