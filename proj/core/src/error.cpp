#include "metriplectic/error.hpp"

namespace metriplectic {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DegenerateK: return "DegenerateK";
    case ErrorCode::NonpositiveTemperature: return "NonpositiveTemperature";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::SingularFrictionMatrix: return "SingularFrictionMatrix";
    case ErrorCode::LegendreInversionFailure: return "LegendreInversionFailure";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::UnsupportedSuite: return "UnsupportedSuite";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    std::optional<std::size_t> index) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (index) {
    out += " (index " + std::to_string(*index) + ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(compose(code, message, index)),
      code_(code),
      index_(index),
      message_(message) {}

}  // namespace metriplectic
