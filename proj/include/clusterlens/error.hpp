#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clusterlens {

enum class Errc {
  // data problems
  EmptyDataset,
  NonFiniteValue,
  DuplicateFeatureName,
  ParseError,
  MissingDataset,
  // contract violations by the caller
  InvalidArgument,
  DimensionMismatch,
  LengthMismatch,
  KMismatch,
  KExceedsN,
  MExceedsN,
  ClusterOutOfRange,
  IndexOutOfRange,
  InvalidFuzzifier,
  InvalidDof,
  InvalidBounds,
  DegenerateRange,
  GridMismatch,
  WeightSumInvalid,
  NotSoftCapable,
  UnknownFeature,
  // numeric failures
  ZeroVariance,
  NotPositiveDefinite,
  EmptyClusterUnrecoverable,
};

std::string_view to_string(Errc code) noexcept;

// Coarse category used by the CLI to pick an exit code.
enum class ErrorCategory { Usage, Data, Numeric };

ErrorCategory category_of(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

}  // namespace clusterlens
