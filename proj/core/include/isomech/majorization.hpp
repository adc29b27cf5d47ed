#pragma once

// Majorization in prefix-sum form (no pre-sorting), upward swaps that move
// mass toward earlier coordinates, and numerical probes of Schur-convexity.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isomech/types.hpp"

namespace isomech {

// x majorizes y: every prefix sum of x is at least the matching prefix sum of
// y and the totals agree, to within 1e-9 * (1 + ||x||_1). Throws LengthMismatch.
bool majorizes(std::span<const double> x, std::span<const double> y);
inline bool majorizes(const ScoreVector& x, const ScoreVector& y) {
  return majorizes(x.values(), y.values());
}
// Exact variant for integer instances.
bool majorizes(std::span<const std::int64_t> x, std::span<const std::int64_t> y);

// Moves `mass` >= 0 from coordinate j to the earlier coordinate i < j.
struct SwapStep {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

// Throws IndexOrder (i >= j), NegativeMass or OutOfRange.
ScoreVector apply_upward_swap(const ScoreVector& z, const SwapStep& step);

// Upward swaps that turn y into x when x majorizes y, built by sending mass
// from the earliest surplus after the earliest deficit. Returns nullopt if
// that construction stalls (only possible through rounding). Throws
// NotMajorized when the precondition fails.
std::optional<std::vector<SwapStep>> decompose_swaps(const ScoreVector& x,
                                                     const ScoreVector& y);

// Upward shuffle: exchange ranked positions i < j of `ranking` when the item
// at j has the larger true score, so that it moves earlier. This permutes
// values; it does not transport mass. Throws PreconditionViolated otherwise.
Ranking upward_shuffle(const Ranking& ranking, std::span<const double> true_scores,
                       std::size_t i, std::size_t j);

using VectorFunction = std::function<double(std::span<const double>)>;
using ScalarFunction = std::function<double(double)>;

struct SchurViolation {
  enum class Kind { Symmetry, Order, Gradient };
  Kind kind;
  std::string detail;
};

struct SchurReport {
  std::size_t order_pairs = 0;
  std::size_t gradient_probes = 0;
  std::vector<SchurViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

// Samples sorted pairs x majorizing y (checking f(x) >= f(y)), symmetry under
// random coordinate permutations, and the criterion
//   (r_i - r_j) (df/dr_i - df/dr_j) >= 0
// with central differences of step 1e-5 * max(1, |r_k|). Coordinates are drawn
// from [-scale, scale]. Violations beyond 1e-6 * (1 + |f|) are reported.
SchurReport check_schur_convex(const VectorFunction& f, std::size_t n, std::size_t trials,
                               std::uint64_t seed, double scale = 1.0);

// Hardy-Littlewood-Polya: sum f(x_i) >= sum f(y_i) - 1e-9 for convex f and
// nonincreasing x majorizing y. Throws PreconditionViolated when x, y are not
// sorted or x does not majorize y.
bool check_hlp(const ScalarFunction& f, std::span<const double> x, std::span<const double> y);

}  // namespace isomech
