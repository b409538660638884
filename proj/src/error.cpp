#include "clusterlens/error.hpp"

namespace clusterlens {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::DuplicateFeatureName: return "DuplicateFeatureName";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingDataset: return "MissingDataset";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::KMismatch: return "KMismatch";
    case Errc::KExceedsN: return "KExceedsN";
    case Errc::MExceedsN: return "MExceedsN";
    case Errc::ClusterOutOfRange: return "ClusterOutOfRange";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidFuzzifier: return "InvalidFuzzifier";
    case Errc::InvalidDof: return "InvalidDof";
    case Errc::InvalidBounds: return "InvalidBounds";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::WeightSumInvalid: return "WeightSumInvalid";
    case Errc::NotSoftCapable: return "NotSoftCapable";
    case Errc::UnknownFeature: return "UnknownFeature";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::EmptyClusterUnrecoverable: return "EmptyClusterUnrecoverable";
  }
  return "Unknown";
}

ErrorCategory category_of(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDataset:
    case Errc::NonFiniteValue:
    case Errc::DuplicateFeatureName:
    case Errc::ParseError:
    case Errc::MissingDataset:
      return ErrorCategory::Data;
    case Errc::ZeroVariance:
    case Errc::NotPositiveDefinite:
    case Errc::EmptyClusterUnrecoverable:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Usage;
  }
}

}  // namespace clusterlens
