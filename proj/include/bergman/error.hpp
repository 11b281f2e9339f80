#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bergman {

enum class ErrorCode {
  InvalidArgument,
  NonMonotoneProfile,
  NonConvexShadow,
  EmptyDomain,
  OutOfRange,
  PoleProximity,
  NotHolomorphic,
  NotHarmonic,
  NotHarmonicOnDisk,
  NotHermitian,
  NoBoundaryDisk,
  TailBoundUnavailable,
  TaylorTailTooLarge,
  QuadratureNonConvergence,
  ConfigInvalid,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonMonotoneProfile: return "NonMonotoneProfile";
    case ErrorCode::NonConvexShadow: return "NonConvexShadow";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::NotHolomorphic: return "NotHolomorphic";
    case ErrorCode::NotHarmonic: return "NotHarmonic";
    case ErrorCode::NotHarmonicOnDisk: return "NotHarmonicOnDisk";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoBoundaryDisk: return "NoBoundaryDisk";
    case ErrorCode::TailBoundUnavailable: return "TailBoundUnavailable";
    case ErrorCode::TaylorTailTooLarge: return "TaylorTailTooLarge";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace bergman
