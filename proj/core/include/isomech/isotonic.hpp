#pragma once

// Euclidean projections onto ranking-ordered isotonic cones and the soft
// variants built on top of them.

#include <cstddef>
#include <span>
#include <vector>

#include "isomech/types.hpp"

namespace isomech {

// A maximal run [start, end) of positions in the ranked order that share
// one fitted value, the mean of the ranked raw scores over the run.
struct Pool {
  std::size_t start = 0;
  std::size_t end = 0;
  double value = 0.0;

  std::size_t length() const noexcept { return end - start; }
};

struct IsotonicFit {
  ScoreVector adjusted;     // in item order
  std::vector<Pool> pools;  // in ranked order; values strictly decrease
  double objective = 0.0;   // 0.5 * ||y - adjusted||^2
};

// Pool-adjacent-violators on an already ranked sequence: returns the
// nonincreasing least-squares fit as pools over positions of `ranked`.
std::vector<Pool> pava_nonincreasing(std::span<const double> ranked);

// argmin 0.5 ||y - r||^2  s.t.  r[order[0]] >= r[order[1]] >= ... >= r[order[n-1]].
// Throws InvalidRanking when the ranking length differs from y.
IsotonicFit project_isotonic(const ScoreVector& y, const Ranking& ranking);

// The ranking that lists block 0 first, then block 1, ...; within each block
// items appear by descending y (ties by index).
Ranking pad_permutation(const BlockPartition& partition, const ScoreVector& y);

// argmin 0.5 ||y - r||^2  s.t.  min(r over block k) >= max(r over block k+1).
// Pools are reported in the order of pad_permutation(partition, y).
IsotonicFit project_block(const ScoreVector& y, const BlockPartition& partition);

// theta * project_isotonic(y, ranking).adjusted + (1 - theta) * y, theta in (0, 1).
ScoreVector soft_combination(const ScoreVector& y, const Ranking& ranking, double theta);

// Penalty lambda * sum_i (r[order[i+1]] - r[order[i]])_+ for a candidate r.
double ranking_penalty(std::span<const double> r, const Ranking& ranking, double lambda);

// argmin 0.5 ||y - r||^2 + ranking_penalty(r, ranking, lambda), lambda > 0.
// Exact: follows the piecewise-linear solution path from lambda = 0, fusing
// adjacent groups as they meet. O(n log n).
ScoreVector solve_penalized(const ScoreVector& y, const Ranking& ranking, double lambda);

struct IterativeOptions {
  std::size_t max_iterations = 200000;
  double gap_tolerance = 1e-13;  // relative duality gap
};

// Accelerated projected gradient on the box-constrained dual of the
// penalized problem. Slow; meant as an independent reference. Throws
// NoConvergence when the duality gap stays above tolerance.
ScoreVector solve_penalized_iterative(const ScoreVector& y, const Ranking& ranking,
                                      double lambda, IterativeOptions options = {});

}  // namespace isomech
