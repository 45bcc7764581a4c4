#include "skiptrack/error.hpp"

namespace skiptrack {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyIndividual: return "EmptyIndividual";
    case ErrorCode::NonPositiveCycle: return "NonPositiveCycle";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteCovariate: return "NonFiniteCovariate";
    case ErrorCode::DivergentLinkValue: return "DivergentLinkValue";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonFiniteLogDensity: return "NonFiniteLogDensity";
    case ErrorCode::DegenerateRate: return "DegenerateRate";
    case ErrorCode::SingularPrecision: return "SingularPrecision";
    case ErrorCode::ImproperConditional: return "ImproperConditional";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InsufficientChains: return "InsufficientChains";
    case ErrorCode::TooManyPartitions: return "TooManyPartitions";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ChainFailure: return "ChainFailure";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace skiptrack
