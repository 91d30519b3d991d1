#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lame {

enum class ErrorKind {
  ContractViolation,
  InvalidExponent,
  InvalidWeight,
  InvalidRegularization,
  InvalidParameter,
  MultiplierSingularity,
  DegenerateInput,
  NoContraction,
  NonConvergence,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception. `value()` carries a numeric detail where one
/// exists (the last contraction ratio for Picard failures).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(message), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

}  // namespace lame
