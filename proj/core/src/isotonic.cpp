#include "isomech/isotonic.hpp"

#include <algorithm>
#include <numeric>

#include "isomech/error.hpp"

namespace isomech {

namespace {

void require_matching(const ScoreVector& y, const Ranking& ranking) {
  if (ranking.size() != y.size()) {
    throw Error(ErrorKind::InvalidRanking,
                "ranking covers " + std::to_string(ranking.size()) + " items but there are " +
                    std::to_string(y.size()) + " scores");
  }
}

double half_squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return 0.5 * acc;
}

IsotonicFit fit_ranked(const ScoreVector& y, const Ranking& ranking) {
  const std::vector<double> ranked = ranking.permute(y.values());
  std::vector<Pool> pools = pava_nonincreasing(ranked);

  std::vector<double> fitted(ranked.size());
  for (const Pool& p : pools) {
    std::fill(fitted.begin() + static_cast<std::ptrdiff_t>(p.start),
              fitted.begin() + static_cast<std::ptrdiff_t>(p.end), p.value);
  }
  ScoreVector adjusted(ranking.unpermute(fitted));
  const double objective = half_squared_distance(y.values(), adjusted.values());
  return IsotonicFit{std::move(adjusted), std::move(pools), objective};
}

}  // namespace

std::vector<Pool> pava_nonincreasing(std::span<const double> ranked) {
  struct Block {
    std::size_t start;
    std::size_t count;
    double sum;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> stack;
  stack.reserve(ranked.size());

  for (std::size_t i = 0; i < ranked.size(); ++i) {
    stack.push_back({i, 1, ranked[i]});
    // Merge until pooled values strictly decrease; equal neighbours are
    // merged so that pools are maximal level sets.
    while (stack.size() > 1) {
      const Block& last = stack.back();
      const Block& prev = stack[stack.size() - 2];
      if (prev.mean() > last.mean()) break;
      Block merged{prev.start, prev.count + last.count, prev.sum + last.sum};
      stack.pop_back();
      stack.back() = merged;
    }
  }

  std::vector<Pool> pools;
  pools.reserve(stack.size());
  for (const Block& b : stack) pools.push_back({b.start, b.start + b.count, b.mean()});
  return pools;
}

IsotonicFit project_isotonic(const ScoreVector& y, const Ranking& ranking) {
  require_matching(y, ranking);
  return fit_ranked(y, ranking);
}

Ranking pad_permutation(const BlockPartition& partition, const ScoreVector& y) {
  if (partition.size() != y.size()) {
    throw Error(ErrorKind::InvalidPartition,
                "partition covers " + std::to_string(partition.size()) + " items but there are " +
                    std::to_string(y.size()) + " scores");
  }
  std::vector<std::size_t> order;
  order.reserve(y.size());
  for (const auto& block : partition.blocks()) {
    const auto first = order.size();
    order.insert(order.end(), block.begin(), block.end());
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(first), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  }
  return Ranking(std::move(order));
}

IsotonicFit project_block(const ScoreVector& y, const BlockPartition& partition) {
  // Inside a block the constraints are symmetric, so the projection keeps the
  // order of y there; the block cone projection therefore coincides with the
  // chain projection under the padded ranking.
  return fit_ranked(y, pad_permutation(partition, y));
}

ScoreVector soft_combination(const ScoreVector& y, const Ranking& ranking, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::ThetaOutOfRange, "theta must lie strictly inside (0, 1)");
  }
  const IsotonicFit fit = project_isotonic(y, ranking);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = theta * fit.adjusted[i] + (1.0 - theta) * y[i];
  }
  return ScoreVector(std::move(out));
}

double ranking_penalty(std::span<const double> r, const Ranking& ranking, double lambda) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < ranking.size(); ++k) {
    acc += std::max(0.0, r[ranking[k + 1]] - r[ranking[k]]);
  }
  return lambda * acc;
}

}  // namespace isomech
