#pragma once

#include <stdexcept>
#include <string>

namespace qns {

/// Invalid grid, model or run configuration (shape mismatch, out-of-range parameter).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller passed an argument outside an operation's documented range.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of a functional (e.g. non-positive density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A study could not produce a meaningful result (e.g. too many excluded paths).
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or a clamp violation in the evolving state.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, double time, std::string field)
      : std::runtime_error(what + " at t=" + std::to_string(time)),
        time_(time),
        field_(std::move(field)) {}

  double time() const noexcept { return time_; }
  const std::string& field() const noexcept { return field_; }

 private:
  double time_;
  std::string field_;
};

}  // namespace qns
