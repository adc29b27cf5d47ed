#include "isomech/mechanism.hpp"

#include <cmath>

#include "isomech/error.hpp"

namespace isomech {

namespace {

double squared_distance(const ScoreVector& a, const ScoreVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

const Ranking& full_ranking(const OwnerReport& report, Variant v) {
  const auto* r = std::get_if<Ranking>(&report);
  if (!r) {
    throw Error(ErrorKind::VariantMismatch,
                "variant '" + to_string(v) + "' needs a full ranking, got a block partition");
  }
  return *r;
}

}  // namespace

std::string describe(const OwnerReport& report) {
  return std::visit([](const auto& r) { return r.to_string(); }, report);
}

std::size_t report_size(const OwnerReport& report) {
  return std::visit([](const auto& r) { return r.size(); }, report);
}

MechanismOutcome run_mechanism(const ScoreVector& y, const OwnerReport& report,
                               const MechanismConfig& config) {
  switch (config.variant()) {
    case Variant::Hard: {
      IsotonicFit fit = project_isotonic(y, full_ranking(report, config.variant()));
      const double residual = std::sqrt(2.0 * fit.objective);
      return {std::move(fit.adjusted), config, std::move(fit.pools), fit.objective, 0.0,
              residual};
    }
    case Variant::Block: {
      const auto* partition = std::get_if<BlockPartition>(&report);
      if (!partition) {
        throw Error(ErrorKind::VariantMismatch,
                    "variant 'block' needs a block partition, got a full ranking");
      }
      IsotonicFit fit = project_block(y, *partition);
      const double residual = std::sqrt(2.0 * fit.objective);
      return {std::move(fit.adjusted), config, std::move(fit.pools), fit.objective, 0.0,
              residual};
    }
    case Variant::ConvexCombination: {
      const Ranking& ranking = full_ranking(report, config.variant());
      IsotonicFit fit = project_isotonic(y, ranking);
      ScoreVector adjusted = soft_combination(y, ranking, config.theta());
      const double sq = squared_distance(y, adjusted);
      return {std::move(adjusted), config, std::move(fit.pools), 0.5 * sq, 0.0, std::sqrt(sq)};
    }
    case Variant::Penalized: {
      const Ranking& ranking = full_ranking(report, config.variant());
      ScoreVector adjusted = solve_penalized(y, ranking, config.lambda());
      const double sq = squared_distance(y, adjusted);
      const double penalty = ranking_penalty(adjusted.values(), ranking, config.lambda());
      return {std::move(adjusted), config, {}, 0.5 * sq + penalty, penalty, std::sqrt(sq)};
    }
  }
  throw Error(ErrorKind::VariantMismatch, "unknown variant");
}

}  // namespace isomech
