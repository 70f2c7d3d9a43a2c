#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metriplectic {

enum class ErrorCode {
  ArityMismatch,
  DimensionMismatch,
  NonFiniteValue,
  DegenerateK,
  NonpositiveTemperature,
  SpecError,
  SingularFrictionMatrix,
  LegendreInversionFailure,
  DomainViolation,
  UnsupportedSuite,
  ConfigError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. `index` carries the offending coordinate, cell or
/// integration step when one is meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
  std::string message_;
};

}  // namespace metriplectic
