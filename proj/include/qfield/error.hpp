#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfield {

enum class ErrorCode {
  NonPositiveFrequency,
  DegenerateSpectrum,
  NonPositiveTemperature,
  MissingMoments,
  ZeroCommutatorExpectation,
  TruncationNotConverged,
  OrderTooHighForTruncation,
  InvalidTruncationConfig,
  ConfigInvalid,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::MissingMoments: return "MissingMoments";
    case ErrorCode::ZeroCommutatorExpectation: return "ZeroCommutatorExpectation";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::OrderTooHighForTruncation: return "OrderTooHighForTruncation";
    case ErrorCode::InvalidTruncationConfig: return "InvalidTruncationConfig";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qfield
