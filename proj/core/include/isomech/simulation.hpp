#pragma once

// Monte-Carlo harness. Every strategy in a plan is evaluated on the same
// noise draw in each trial (common random numbers), trial seeds come from
// trial_seed(master_seed, t), and statistics are merged in trial order, so a
// plan always produces the same report regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "isomech/mechanism.hpp"
#include "isomech/noise.hpp"
#include "isomech/types.hpp"
#include "isomech/utility.hpp"

namespace isomech {

inline constexpr std::uint64_t kMaxFullStrategies = 40320;   // 8!
inline constexpr std::uint64_t kMaxBlockStrategies = 10000;

enum class StrategyKind { Full, Block };

// n! or the multinomial n! / prod(sizes_k!), saturating at UINT64_MAX.
std::uint64_t count_strategies(StrategyKind kind, std::size_t n,
                               const std::vector<std::size_t>& sizes = {});

// Full: all n! rankings in lexicographic order. Block: every ordered
// partition with the given sizes, ordered lexicographically by the block
// label of each item. Throws CombinatorialBlowup (detail = count) past the
// bounds above, InvalidPartition if sizes do not sum to n.
std::vector<OwnerReport> enumerate_strategies(StrategyKind kind, std::size_t n,
                                              const std::vector<std::size_t>& sizes = {});

// True when the report orders R consistently (a true ranking or a true block
// partition; ties may be broken either way).
bool is_truthful(const OwnerReport& report, std::span<const double> true_scores);

// Reports whose true-score pattern (ranked R, or per-block multiset of R)
// coincides differ only by relabelling tied items.
bool tie_equivalent(const OwnerReport& a, const OwnerReport& b,
                    std::span<const double> true_scores);

struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const RunningStats& other) noexcept;
  double variance() const noexcept;  // sample variance
  double std_err() const noexcept;
};

struct TrialPlan {
  ScoreVector true_scores;
  NoiseModel noise;
  UtilitySpec utility;
  MechanismConfig mechanism;
  std::vector<OwnerReport> strategies;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  // Index of the strategy the paired gaps are taken against. Defaults to the
  // first truthful strategy, else 0.
  std::optional<std::size_t> reference;
  bool keep_records = false;
};

struct StrategySummary {
  double mean_utility = 0.0;
  double std_err = 0.0;
  double mean_sq_error = 0.0;  // E sum (adjusted_i - R_i)^2
  double sq_error_std_err = 0.0;
  double paired_gap = 0.0;  // E[U(reference) - U(this)]
  double gap_std_err = 0.0;
  // max over trials of sum (adjusted - R)^2 - sum (y - R)^2
  double worst_excess_over_raw = 0.0;
  bool truthful = false;
  bool tie_equivalent_to_reference = false;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<double> noise;
  std::vector<std::vector<double>> adjusted;  // per strategy
  std::vector<double> utilities;
  std::vector<double> sq_errors;
};

struct TrialReport {
  std::vector<StrategySummary> strategies;
  std::size_t reference = 0;
  std::size_t argmax = 0;
  bool reference_is_truthful = false;
  // argmax's true-score pattern matches the (truthful) reference's.
  bool truthful_is_argmax = false;
  std::size_t trials = 0;
  double raw_sq_error = 0.0;  // E sum z_i^2
  double raw_sq_error_std_err = 0.0;
  std::vector<TrialRecord> records;  // only with keep_records
};

// Throws InvalidPlan (empty strategies, zero trials, wrong report length,
// report kind incompatible with the mechanism variant, bad reference),
// TooManyStrategies, and InvalidParameter when the utility fails validation
// on [min R - 3 sd - 1, max R + 3 sd + 1]. `threads` = 0 picks the hardware
// concurrency.
TrialReport run_strategy_comparison(const TrialPlan& plan, unsigned threads = 0);

// Descending equally spaced scores with max - min = spread: R_i = spread (n-1-i)/(n-1).
ScoreVector equally_spaced_scores(std::size_t n, double spread);

struct RiskRow {
  std::size_t n = 0;
  double mechanism_risk = 0.0;  // E sum (R^_i - R_i)^2 under truthful reporting
  double mechanism_risk_std_err = 0.0;
  double raw_risk = 0.0;  // E sum z_i^2
  double raw_risk_std_err = 0.0;
  double normalizer = 0.0;  // n^(1/3) sigma^(4/3) V^(2/3)
  double ratio = 0.0;       // mechanism_risk / normalizer
  double ratio_std_err = 0.0;
};

// Risk of the truthful hard mechanism on equally_spaced_scores(n, V) with iid
// N(0, sigma^2) noise. Throws InvalidGrid for an empty, zero-containing or
// non-increasing grid, InvalidParameter for sigma <= 0, V <= 0 or trials = 0.
std::vector<RiskRow> run_risk_scaling(const std::vector<std::size_t>& n_grid, double sigma,
                                      double spread, std::size_t trials, std::uint64_t seed,
                                      unsigned threads = 0);

struct FaithfulnessComparison {
  StrategySummary first;
  StrategySummary second;
  double gap = 0.0;  // E[U(first) - U(second)]
  double gap_std_err = 0.0;
};

// Hard mechanism, paired comparison of reporting `first` versus `second`.
// Throws NotFaithfulPair unless first o R majorizes second o R.
FaithfulnessComparison run_faithfulness_pair(const ScoreVector& true_scores,
                                             const Ranking& first, const Ranking& second,
                                             const NoiseModel& noise, const UtilitySpec& utility,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads = 0);

}  // namespace isomech
