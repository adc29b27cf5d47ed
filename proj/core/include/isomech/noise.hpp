#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "isomech/types.hpp"

namespace isomech {

// Counter-based seed for trial `index` of a run seeded with `master`
// (splitmix64 finalizer over both words). Trials can run in any order.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Draws z ~ model in place using `rng`. PermutedBase needs one scale per
// coordinate (InvalidParameter otherwise).
void sample_noise_into(const NoiseModel& model, std::mt19937_64& rng, std::span<double> out);

// Deterministic in (model, n, seed).
ScoreVector sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed);

// Marginal standard deviation of one coordinate.
double marginal_sd(const NoiseModel& model);

}  // namespace isomech
