#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isomech/error.hpp"
#include "isomech/isotonic.hpp"
#include "oracles.hpp"

namespace isomech {
namespace {

using testing::block_constraints;
using testing::chain_constraints;
using testing::cone_projection_oracle;

void expect_values(const ScoreVector& got, const std::vector<double>& want, double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "i = " << i;
}

TEST(ProjectIsotonic, Examples) {
  expect_values(project_isotonic(ScoreVector{3, 1}, Ranking::identity(2)).adjusted, {3, 1});
  expect_values(project_isotonic(ScoreVector{1, 3}, Ranking::identity(2)).adjusted, {2, 2});
  expect_values(project_isotonic(ScoreVector{1, 2, 3}, Ranking::identity(3)).adjusted,
                {2, 2, 2});
}

TEST(ProjectIsotonic, FollowsTheReportedOrder) {
  // Claiming item 1 is best makes the (1, 3) pair feasible.
  expect_values(project_isotonic(ScoreVector{1, 3}, Ranking{1, 0}).adjusted, {1, 3});
  const IsotonicFit fit = project_isotonic(ScoreVector{3, 1}, Ranking{1, 0});
  expect_values(fit.adjusted, {2, 2});
  EXPECT_DOUBLE_EQ(fit.objective, 1.0);
  ASSERT_EQ(fit.pools.size(), 1u);
  EXPECT_EQ(fit.pools[0].start, 0u);
  EXPECT_EQ(fit.pools[0].end, 2u);
}

TEST(ProjectIsotonic, RejectsMismatchedRanking) {
  try {
    project_isotonic(ScoreVector{1, 2, 3}, Ranking::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidRanking);
  }
}

TEST(ProjectIsotonic, TiedPoolsAreMerged) {
  // Two runs with equal means collapse into one level set.
  const IsotonicFit fit = project_isotonic(ScoreVector{1, 3, 1, 3}, Ranking::identity(4));
  ASSERT_EQ(fit.pools.size(), 1u);
  expect_values(fit.adjusted, {2, 2, 2, 2});
}

TEST(ProjectIsotonic, MatchesConeOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const auto y = trial % 4 == 0 ? testing::random_tied_vector(rng, n)
                                   : testing::random_vector(rng, n);
    const auto order = testing::random_permutation(rng, n);
    const auto expected = cone_projection_oracle(y, chain_constraints(order));
    const IsotonicFit fit = project_isotonic(ScoreVector(y), Ranking(order));
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(fit.adjusted[i], expected[i], 1e-8);
  }
}

TEST(ProjectIsotonic, PoolInvariants) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 40;
    const ScoreVector y(testing::random_vector(rng, n));
    const Ranking ranking(testing::random_permutation(rng, n));
    const IsotonicFit fit = project_isotonic(y, ranking);
    const auto ranked_y = ranking.permute(y.values());
    const auto ranked_fit = ranking.permute(fit.adjusted.values());

    ASSERT_FALSE(fit.pools.empty());
    EXPECT_EQ(fit.pools.front().start, 0u);
    EXPECT_EQ(fit.pools.back().end, n);
    for (std::size_t p = 0; p < fit.pools.size(); ++p) {
      const Pool& pool = fit.pools[p];
      if (p > 0) {
        EXPECT_EQ(pool.start, fit.pools[p - 1].end);
        EXPECT_LT(pool.value, fit.pools[p - 1].value);
      }
      double mass_y = 0.0, mass_fit = 0.0, abs_y = 0.0;
      for (std::size_t k = pool.start; k < pool.end; ++k) {
        mass_y += ranked_y[k];
        mass_fit += ranked_fit[k];
        abs_y += std::abs(ranked_y[k]);
        EXPECT_EQ(ranked_fit[k], pool.value);
      }
      EXPECT_NEAR(mass_fit, mass_y, 1e-10 * (1.0 + abs_y));
    }
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(ranked_fit[k], ranked_fit[k - 1]);
  }
}

TEST(ProjectIsotonic, IdentityIdempotenceAndTranslation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 25;
    const ScoreVector y(testing::random_vector(rng, n));
    const Ranking ranking(testing::random_permutation(rng, n));
    const IsotonicFit fit = project_isotonic(y, ranking);

    // Already feasible input comes back unchanged.
    const IsotonicFit again = project_isotonic(fit.adjusted, ranking);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(again.adjusted[i], fit.adjusted[i], 1e-12);

    std::vector<double> shifted(y.begin(), y.end());
    for (double& v : shifted) v += 7.5;
    const IsotonicFit moved = project_isotonic(ScoreVector(shifted), ranking);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(moved.adjusted[i], fit.adjusted[i] + 7.5, 1e-10);
  }
}

// For any r in the cone, ||P(y) - r|| <= ||y - r||.
TEST(ProjectIsotonic, NonexpansiveTowardFeasiblePoints) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 20;
    const Ranking ranking(testing::random_permutation(rng, n));
    auto feasible = testing::random_vector(rng, n);
    std::sort(feasible.begin(), feasible.end(), std::greater<>());
    const ScoreVector r(ranking.unpermute(feasible));
    const ScoreVector y(testing::random_vector(rng, n));
    const IsotonicFit fit = project_isotonic(y, ranking);
    double d_fit = 0.0, d_raw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d_fit += (fit.adjusted[i] - r[i]) * (fit.adjusted[i] - r[i]);
      d_raw += (y[i] - r[i]) * (y[i] - r[i]);
    }
    EXPECT_LE(d_fit, d_raw + 1e-10);
  }
}

TEST(PadPermutation, Examples) {
  const ScoreVector y{4.4, 6.6, 5, -1};
  const BlockPartition blocks({{0, 2}, {1, 3}});
  const Ranking padded = pad_permutation(blocks, y);
  EXPECT_EQ(padded, (Ranking{2, 0, 1, 3}));
  EXPECT_EQ(padded.permute(y.values()), (std::vector<double>{5, 4.4, 6.6, -1}));

  EXPECT_EQ(pad_permutation(BlockPartition({{0}, {1}}), ScoreVector{-3, 8}), (Ranking{0, 1}));
  EXPECT_EQ(pad_permutation(BlockPartition({{0, 1}, {2}}), ScoreVector{1, 2, 0}),
            (Ranking{1, 0, 2}));
}

TEST(PadPermutation, RejectsSizeMismatch) {
  try {
    pad_permutation(BlockPartition({{0}, {1}}), ScoreVector{1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPartition);
  }
}

TEST(ProjectBlock, Examples) {
  expect_values(project_block(ScoreVector{9, 8, 2, 1}, BlockPartition({{0, 1}, {2, 3}})).adjusted,
                {9, 8, 2, 1});
  // Block cone {r0, r2} >= {r1, r3}; the first three items pool at 16/3.
  const std::vector<double> y{4.4, 6.6, 5, -1};
  const BlockPartition blocks({{0, 2}, {1, 3}});
  const IsotonicFit fit = project_block(ScoreVector(y), blocks);
  expect_values(fit.adjusted, {16.0 / 3.0, 16.0 / 3.0, 16.0 / 3.0, -1});
  const auto oracle = cone_projection_oracle(y, block_constraints(blocks.blocks()));
  expect_values(fit.adjusted, oracle, 1e-10);
}

TEST(ProjectBlock, MatchesBlockConeOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto y = trial % 4 == 0 ? testing::random_tied_vector(rng, n)
                                  : testing::random_vector(rng, n);
    const auto blocks = testing::random_blocks(rng, n);
    const BlockPartition partition(blocks);
    const auto expected = cone_projection_oracle(y, block_constraints(partition.blocks()));
    const IsotonicFit fit = project_block(ScoreVector(y), partition);
    const IsotonicFit padded = project_isotonic(ScoreVector(y), pad_permutation(partition, ScoreVector(y)));
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(fit.adjusted[i], expected[i], 1e-8);
      ASSERT_EQ(fit.adjusted[i], padded.adjusted[i]);
    }
    // min over block k >= max over block k + 1.
    for (std::size_t k = 0; k + 1 < partition.block_count(); ++k) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t i : partition.block(k)) lo = std::min(lo, fit.adjusted[i]);
      for (std::size_t i : partition.block(k + 1)) hi = std::max(hi, fit.adjusted[i]);
      EXPECT_GE(lo, hi);
    }
  }
}

TEST(SoftCombination, Examples) {
  expect_values(soft_combination(ScoreVector{1, 3}, Ranking::identity(2), 0.5), {1.5, 2.5});
  expect_values(soft_combination(ScoreVector{5, 2, 1}, Ranking::identity(3), 0.37), {5, 2, 1});
  for (double bad : {0.0, 1.0, -0.1, 1.5}) {
    try {
      soft_combination(ScoreVector{1, 3}, Ranking::identity(2), bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ThetaOutOfRange);
    }
  }
}

TEST(SoftCombination, InterpolatesBetweenRawAndProjection) {
  const ScoreVector y{0, 4, 1, 7};
  const Ranking ranking{3, 0, 2, 1};
  const IsotonicFit hard = project_isotonic(y, ranking);
  const ScoreVector near_hard = soft_combination(y, ranking, 1.0 - 1e-12);
  const ScoreVector near_raw = soft_combination(y, ranking, 1e-12);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(near_hard[i], hard.adjusted[i], 1e-10);
    EXPECT_NEAR(near_raw[i], y[i], 1e-10);
  }
}

}  // namespace
}  // namespace isomech
