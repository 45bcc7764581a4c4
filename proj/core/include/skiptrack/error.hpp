#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skiptrack {

enum class ErrorCode {
  EmptyIndividual,
  NonPositiveCycle,
  DimensionMismatch,
  NonFiniteCovariate,
  DivergentLinkValue,
  DomainError,
  NonFiniteLogDensity,
  DegenerateRate,
  SingularPrecision,
  ImproperConditional,
  InsufficientData,
  InsufficientChains,
  TooManyPartitions,
  LengthMismatch,
  InvalidParameter,
  ChainFailure,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skiptrack
