#pragma once

#include <stdexcept>
#include <string>

namespace disg {

enum class ErrorCode {
  NonStochasticRow,
  NegativeEntry,
  DimensionMismatch,
  ZeroLikelihood,
  SignalActionMismatch,
  GridMismatch,
  ResolutionTooLarge,
  OracleViolation,
  EnumerationTooLarge,
  UnsupportedDimension,
  InvalidArgument,
  ConfigError,
};

const char* to_string(ErrorCode code);

class DisgError : public std::runtime_error {
 public:
  DisgError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace disg
