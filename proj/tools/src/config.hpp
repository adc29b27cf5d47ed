#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "isomech/simulation.hpp"

namespace isomech::tool {

// Declarative experiment file, one key per TrialPlan field:
//
//   {
//     "true_scores": [3, 2, 1, 0],
//     "noise": {"model": "iid-gaussian", "sigma": 1},
//     "utility": {"family": "square-plus"},
//     "mechanism": {"variant": "hard"},
//     "strategies": "all",
//     "trials": 100000,
//     "seed": 2024
//   }
//
// noise.model: iid-gaussian {sigma}, exchangeable-latent {sigma, tau},
// permuted-base {scales}. utility: a builtin family with "params", or
// {"family": "score-dependent", "g": {...}, "h": {...}}. mechanism.variant:
// hard, block, soft {theta}, penalized {lambda}. strategies: "all" or an
// explicit list of rankings (block variant: lists of blocks); the block
// variant with "all" also needs "block_sizes". Optional: "reference"
// (strategy index), "threads".
struct ExperimentConfig {
  TrialPlan plan;
  unsigned threads = 0;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config(const std::filesystem::path& path);

}  // namespace isomech::tool
