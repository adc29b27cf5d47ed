#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isomech/error.hpp"
#include "isomech/mechanism.hpp"
#include "oracles.hpp"

namespace isomech {
namespace {

TEST(RunMechanism, Examples) {
  const ScoreVector y{1, 3};
  const MechanismOutcome hard = run_mechanism(y, Ranking::identity(2), MechanismConfig::hard());
  EXPECT_EQ(hard.adjusted, (ScoreVector{2, 2}));
  EXPECT_DOUBLE_EQ(hard.objective, 1.0);
  EXPECT_DOUBLE_EQ(hard.residual, std::sqrt(2.0));

  const MechanismOutcome soft =
      run_mechanism(y, Ranking::identity(2), MechanismConfig::convex_combination(0.5));
  EXPECT_EQ(soft.adjusted, (ScoreVector{1.5, 2.5}));

  const ScoreVector y4{4.4, 6.6, 5, -1};
  const BlockPartition blocks({{0, 2}, {1, 3}});
  const MechanismOutcome block = run_mechanism(y4, blocks, MechanismConfig::block());
  const IsotonicFit direct = project_block(y4, blocks);
  EXPECT_EQ(block.adjusted, direct.adjusted);
  EXPECT_EQ(block.pools.size(), direct.pools.size());

  const MechanismOutcome pen =
      run_mechanism(ScoreVector{0, 2}, Ranking::identity(2), MechanismConfig::penalized(0.5));
  EXPECT_NEAR(pen.adjusted[0], 0.5, 1e-12);
  EXPECT_NEAR(pen.penalty, 0.5 * 1.0, 1e-12);
  EXPECT_NEAR(pen.objective, 0.5 * 0.5 + 0.5, 1e-12);
}

TEST(RunMechanism, VariantMismatch) {
  const ScoreVector y{1, 2};
  const BlockPartition blocks({{0}, {1}});
  for (const auto& config : {MechanismConfig::hard(), MechanismConfig::convex_combination(0.4),
                             MechanismConfig::penalized(1.0)}) {
    try {
      run_mechanism(y, blocks, config);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::VariantMismatch);
    }
  }
  try {
    run_mechanism(y, Ranking::identity(2), MechanismConfig::block());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VariantMismatch);
  }
}

TEST(RunMechanism, SolverErrorsPassThrough) {
  try {
    run_mechanism(ScoreVector{1, 2, 3}, Ranking::identity(2), MechanismConfig::hard());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidRanking);
  }
}

TEST(RunMechanism, DeterministicConservingAndFeasible) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const ScoreVector y(testing::random_vector(rng, n));
    const Ranking ranking(testing::random_permutation(rng, n));
    const MechanismOutcome a = run_mechanism(y, ranking, MechanismConfig::hard());
    const MechanismOutcome b = run_mechanism(y, ranking, MechanismConfig::hard());
    EXPECT_EQ(a.adjusted, b.adjusted);
    double abs_sum = 0;
    for (double v : y) abs_sum += std::abs(v);
    EXPECT_NEAR(a.adjusted.sum(), y.sum(), 1e-10 * (1 + abs_sum));
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(a.adjusted[ranking[k]], a.adjusted[ranking[k - 1]]);

    const BlockPartition partition(testing::random_blocks(rng, n));
    const MechanismOutcome blk = run_mechanism(y, partition, MechanismConfig::block());
    for (std::size_t k = 0; k + 1 < partition.block_count(); ++k) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t i : partition.block(k)) lo = std::min(lo, blk.adjusted[i]);
      for (std::size_t i : partition.block(k + 1)) hi = std::max(hi, blk.adjusted[i]);
      EXPECT_GE(lo, hi);
    }
    double r2 = 0;
    for (std::size_t i = 0; i < n; ++i) r2 += (y[i] - blk.adjusted[i]) * (y[i] - blk.adjusted[i]);
    EXPECT_NEAR(blk.residual, std::sqrt(r2), 1e-12);
  }
}

}  // namespace
}  // namespace isomech
