#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace isomech::tool {

struct AdjustOptions {
  std::filesystem::path scores;
  std::filesystem::path ranking;
  std::string variant = "hard";
  std::optional<double> theta;
  std::optional<double> lambda;
  std::optional<std::filesystem::path> out;  // stdout when absent
};

struct TruthfulnessOptions {
  std::filesystem::path config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";  // directory for strategies.csv and verdict.json
  std::optional<unsigned> threads;
};

struct RiskCurveOptions {
  std::vector<std::size_t> n_grid{64, 256, 1024};
  double sigma = 1.0;
  double v = 1.0;
  std::size_t trials = 2000;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;  // stdout when absent
  unsigned threads = 0;
};

// Each returns the process exit code; diagnostics go to `err`.
int cmd_adjust(const AdjustOptions& opts, std::ostream& out, std::ostream& err);
int cmd_truthfulness(const TruthfulnessOptions& opts, std::ostream& out, std::ostream& err);
int cmd_risk_curve(const RiskCurveOptions& opts, std::ostream& out, std::ostream& err);

// Full command line, argv[0] excluded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isomech::tool
