#pragma once

// The mechanism as a transaction: raw scores plus the owner's report in,
// adjusted scores plus diagnostics out.

#include <string>
#include <variant>
#include <vector>

#include "isomech/isotonic.hpp"
#include "isomech/types.hpp"

namespace isomech {

// A full ranking or an ordered block partition.
using OwnerReport = std::variant<Ranking, BlockPartition>;

std::string describe(const OwnerReport& report);
std::size_t report_size(const OwnerReport& report);

struct MechanismOutcome {
  ScoreVector adjusted;
  MechanismConfig config;
  // Pools of the underlying hard/block projection (empty for penalized).
  std::vector<Pool> pools;
  // Value of the objective the variant minimizes at `adjusted`; for the
  // convex-combination variant, 0.5 ||y - adjusted||^2.
  double objective = 0.0;
  double penalty = 0.0;   // penalized variant only
  double residual = 0.0;  // ||y - adjusted||
};

// Hard and the two soft variants take a full ranking, the block variant a
// partition; any other pairing throws VariantMismatch. Solver errors pass
// through unchanged.
MechanismOutcome run_mechanism(const ScoreVector& y, const OwnerReport& report,
                               const MechanismConfig& config);

}  // namespace isomech
