#include "mixnorm/errors.hpp"

namespace mixnorm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroModePresent: return "ZeroModePresent";
    case ErrorCode::DuplicateWavevector: return "DuplicateWavevector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::NonFiniteAmplitude: return "NonFiniteAmplitude";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::ParameterConstraintViolated: return "ParameterConstraintViolated";
    case ErrorCode::NegativeDiffusivity: return "NegativeDiffusivity";
    case ErrorCode::DegenerateNorm: return "DegenerateNorm";
    case ErrorCode::InsufficientHorizon: return "InsufficientHorizon";
    case ErrorCode::NoCandidateTimes: return "NoCandidateTimes";
    case ErrorCode::StateCapExceeded: return "StateCapExceeded";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SubsequenceUnavailable: return "SubsequenceUnavailable";
    case ErrorCode::MisalignedSeries: return "MisalignedSeries";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NonPositiveValues: return "NonPositiveValues";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mixnorm
