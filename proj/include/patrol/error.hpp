#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patrol {

enum class ErrorCode {
  MalformedNumber,
  ZeroDenominator,
  DivisionByZero,
  NonpositiveInput,
  TimeOutOfRange,
  PositionOutOfRange,
  SchemaViolation,
  InvalidSchedule,
  NotPeriodic,
  EmptySpeeds,
  UnsortedSpeeds,
  SpeedOrder,
  BadK,
  BadTau,
  BadHorizon,
  BadX,
  BadParams,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedNumber: return "MALFORMED_NUMBER";
    case ErrorCode::ZeroDenominator: return "ZERO_DENOMINATOR";
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::NonpositiveInput: return "NONPOSITIVE_INPUT";
    case ErrorCode::TimeOutOfRange: return "TIME_OUT_OF_RANGE";
    case ErrorCode::PositionOutOfRange: return "POSITION_OUT_OF_RANGE";
    case ErrorCode::SchemaViolation: return "SCHEMA_VIOLATION";
    case ErrorCode::InvalidSchedule: return "INVALID_SCHEDULE";
    case ErrorCode::NotPeriodic: return "NOT_PERIODIC";
    case ErrorCode::EmptySpeeds: return "EMPTY_SPEEDS";
    case ErrorCode::UnsortedSpeeds: return "UNSORTED_SPEEDS";
    case ErrorCode::SpeedOrder: return "SPEED_ORDER";
    case ErrorCode::BadK: return "BAD_K";
    case ErrorCode::BadTau: return "BAD_TAU";
    case ErrorCode::BadHorizon: return "BAD_HORIZON";
    case ErrorCode::BadX: return "BAD_X";
    case ErrorCode::BadParams: return "BAD_PARAMS";
  }
  return "UNKNOWN";
}

/// Exception carrying one of the library's error codes. what() is
/// "<CODE>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace patrol
