#include "isomech/error.hpp"

namespace isomech {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateIndex: return "DuplicateIndex";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::WrongLength: return "WrongLength";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::InvalidRanking: return "InvalidRanking";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorKind::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IndexOrder: return "IndexOrder";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NotMajorized: return "NotMajorized";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::MissingTrueScores: return "MissingTrueScores";
    case ErrorKind::NonFiniteScore: return "NonFiniteScore";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::VariantMismatch: return "VariantMismatch";
    case ErrorKind::TooManyStrategies: return "TooManyStrategies";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::NotFaithfulPair: return "NotFaithfulPair";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::uint64_t> detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(detail) {}

}  // namespace isomech
