#pragma once

#include <stdexcept>
#include <string>

namespace cppou {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x < 0 for k, etc).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or model parameters. Carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical procedure failed to meet its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double estimate, double tolerance)
      : Error(what + " (estimate " + std::to_string(estimate) + ", tolerance " +
              std::to_string(tolerance) + ")"),
        estimate_(estimate),
        tolerance_(tolerance) {}
  double estimate() const noexcept { return estimate_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double estimate_;
  double tolerance_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cppou
