#include "isomech/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "isomech/error.hpp"

namespace isomech {

ScoreVector::ScoreVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::EmptyInput, "score vector must have at least one entry");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::NonFiniteInput,
                  "score at index " + std::to_string(i) + " is not finite", i);
    }
  }
}

ScoreVector::ScoreVector(std::initializer_list<double> values)
    : ScoreVector(std::vector<double>(values)) {}

double ScoreVector::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void validate_ranking(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) {
    throw Error(ErrorKind::WrongLength,
                "ranking has " + std::to_string(order.size()) + " entries, expected " +
                    std::to_string(n),
                order.size());
  }
  std::vector<bool> seen(n, false);
  for (std::size_t idx : order) {
    if (idx >= n) {
      throw Error(ErrorKind::OutOfRange,
                  "index " + std::to_string(idx) + " outside [0, " + std::to_string(n) + ")",
                  idx);
    }
    if (seen[idx]) {
      throw Error(ErrorKind::DuplicateIndex, "index " + std::to_string(idx) + " repeated",
                  idx);
    }
    seen[idx] = true;
  }
}

Ranking::Ranking(std::vector<std::size_t> order) : order_(std::move(order)) {
  if (order_.empty()) {
    throw Error(ErrorKind::EmptyInput, "ranking must contain at least one item");
  }
  validate_ranking(order_, order_.size());
}

Ranking::Ranking(std::initializer_list<std::size_t> order)
    : Ranking(std::vector<std::size_t>(order)) {}

Ranking Ranking::identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Ranking(std::move(order));
}

Ranking Ranking::descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return Ranking(std::move(order));
}

std::vector<double> Ranking::permute(std::span<const double> v) const {
  std::vector<double> out(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) out[k] = v[order_[k]];
  return out;
}

std::vector<double> Ranking::unpermute(std::span<const double> v) const {
  std::vector<double> out(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) out[order_[k]] = v[k];
  return out;
}

std::string Ranking::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    if (k) os << ' ';
    os << order_[k];
  }
  return os.str();
}

BlockPartition::BlockPartition(std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw Error(ErrorKind::InvalidPartition, "partition has no blocks");
  }
  for (const auto& b : blocks_) {
    if (b.empty()) throw Error(ErrorKind::InvalidPartition, "partition has an empty block");
    n_ += b.size();
  }
  std::vector<bool> seen(n_, false);
  for (auto& b : blocks_) {
    std::sort(b.begin(), b.end());
    for (std::size_t idx : b) {
      if (idx >= n_) {
        throw Error(ErrorKind::InvalidPartition,
                    "index " + std::to_string(idx) + " outside [0, " + std::to_string(n_) + ")",
                    idx);
      }
      if (seen[idx]) {
        throw Error(ErrorKind::InvalidPartition,
                    "index " + std::to_string(idx) + " appears in more than one block", idx);
      }
      seen[idx] = true;
    }
  }
}

std::vector<std::size_t> BlockPartition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.size());
  return out;
}

std::string BlockPartition::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (k) os << " | ";
    for (std::size_t j = 0; j < blocks_[k].size(); ++j) {
      if (j) os << ' ';
      os << blocks_[k][j];
    }
  }
  return os.str();
}

namespace {

void require_scale(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw Error(ErrorKind::InvalidParameter, std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void validate_noise(const NoiseModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidGaussian>) {
          require_scale(m.sigma, "sigma");
        } else if constexpr (std::is_same_v<T, ExchangeableLatent>) {
          require_scale(m.sigma, "sigma");
          require_scale(m.tau, "tau");
        } else {
          if (m.scales.empty()) {
            throw Error(ErrorKind::InvalidParameter, "permuted-base needs at least one scale");
          }
          for (double s : m.scales) require_scale(s, "scale");
        }
      },
      model);
}

std::string describe(const NoiseModel& model) {
  std::ostringstream os;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidGaussian>) {
          os << "iid-gaussian(sigma=" << m.sigma << ")";
        } else if constexpr (std::is_same_v<T, ExchangeableLatent>) {
          os << "exchangeable-latent(sigma=" << m.sigma << ", tau=" << m.tau << ")";
        } else {
          os << "permuted-base(" << m.scales.size() << " scales)";
        }
      },
      model);
  return os.str();
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Hard: return "hard";
    case Variant::Block: return "block";
    case Variant::ConvexCombination: return "soft";
    case Variant::Penalized: return "penalized";
  }
  return "unknown";
}

MechanismConfig MechanismConfig::hard() { return {Variant::Hard, 0.0, 0.0}; }

MechanismConfig MechanismConfig::block() { return {Variant::Block, 0.0, 0.0}; }

MechanismConfig MechanismConfig::convex_combination(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::ThetaOutOfRange, "theta must lie strictly inside (0, 1)");
  }
  return {Variant::ConvexCombination, theta, 0.0};
}

MechanismConfig MechanismConfig::penalized(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::LambdaOutOfRange, "lambda must be finite and > 0");
  }
  return {Variant::Penalized, 0.0, lambda};
}

double total_variation(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorKind::EmptyInput, "total variation of an empty vector");
  auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return *hi - *lo;
}

}  // namespace isomech
