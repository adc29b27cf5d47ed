#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace isomech {

enum class ErrorKind {
  // validation of domain types
  DuplicateIndex,
  OutOfRange,
  WrongLength,
  EmptyInput,
  NonFiniteInput,
  InvalidRanking,
  InvalidPartition,
  // solvers
  ThetaOutOfRange,
  LambdaOutOfRange,
  NoConvergence,
  // majorization
  LengthMismatch,
  IndexOrder,
  NegativeMass,
  NotMajorized,
  PreconditionViolated,
  // utilities
  MissingTrueScores,
  NonFiniteScore,
  InvalidParameter,
  // mechanism and simulation
  VariantMismatch,
  TooManyStrategies,
  InvalidPlan,
  CombinatorialBlowup,
  InvalidGrid,
  NotFaithfulPair,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the library is reported through this type. `detail`
// carries the offending index (validation errors) or the computed count
// (combinatorial errors) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::uint64_t> detail = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint64_t> detail_;
};

}  // namespace isomech
