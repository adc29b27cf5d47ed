#pragma once

// Value types shared by the solvers, the mechanism and the simulation
// harness. All of them validate on construction and are immutable after.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace isomech {

// Length-n vector of finite real scores (raw, true or adjusted).
class ScoreVector {
 public:
  explicit ScoreVector(std::vector<double> values);
  ScoreVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  double sum() const noexcept;

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;

 private:
  std::vector<double> values_;
};

// A permutation of item indices; position 0 holds the item claimed best.
class Ranking {
 public:
  explicit Ranking(std::vector<std::size_t> order);
  Ranking(std::initializer_list<std::size_t> order);

  static Ranking identity(std::size_t n);
  // Items sorted by descending score; equal scores keep index order.
  static Ranking descending(std::span<const double> scores);

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t operator[](std::size_t position) const { return order_[position]; }
  std::span<const std::size_t> order() const noexcept { return order_; }

  // (v[order[0]], ..., v[order[n-1]])
  std::vector<double> permute(std::span<const double> v) const;
  // Inverse of permute: out[order[k]] = v[k].
  std::vector<double> unpermute(std::span<const double> v) const;

  std::string to_string() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::size_t> order_;
};

// Ordered partition (I_1, ..., I_m) of {0, ..., n-1}; block 0 is claimed
// to dominate block 1, and so on. Each block is stored sorted ascending.
class BlockPartition {
 public:
  explicit BlockPartition(std::vector<std::vector<std::size_t>> blocks);

  std::size_t size() const noexcept { return n_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t k) const { return blocks_[k]; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  std::vector<std::size_t> sizes() const;

  std::string to_string() const;

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::size_t n_ = 0;
};

// Exchangeable noise families for y = R + z.
struct IidGaussian {
  double sigma = 1.0;
};
// Shared latent L ~ N(0, tau^2) added to iid N(0, sigma^2) per coordinate.
struct ExchangeableLatent {
  double sigma = 1.0;
  double tau = 0.0;
};
// Independent N(0, scales[k]^2) draws, then a uniformly random permutation.
// The base law is not exchangeable; the permuted one is.
struct PermutedBase {
  std::vector<double> scales;
};
using NoiseModel = std::variant<IidGaussian, ExchangeableLatent, PermutedBase>;

void validate_noise(const NoiseModel& model);
std::string describe(const NoiseModel& model);

enum class Variant { Hard, Block, ConvexCombination, Penalized };

std::string to_string(Variant v);

class MechanismConfig {
 public:
  static MechanismConfig hard();
  static MechanismConfig block();
  static MechanismConfig convex_combination(double theta);
  static MechanismConfig penalized(double lambda);

  Variant variant() const noexcept { return variant_; }
  double theta() const noexcept { return theta_; }
  double lambda() const noexcept { return lambda_; }

  friend bool operator==(const MechanismConfig&, const MechanismConfig&) = default;

 private:
  MechanismConfig(Variant v, double theta, double lambda)
      : variant_(v), theta_(theta), lambda_(lambda) {}

  Variant variant_;
  double theta_;
  double lambda_;
};

// Succeeds iff `order` is a permutation of {0, ..., n-1}. Throws WrongLength,
// OutOfRange or DuplicateIndex, naming the offending index.
void validate_ranking(std::span<const std::size_t> order, std::size_t n);

// max_i R_i - min_i R_i. Throws EmptyInput.
double total_variation(std::span<const double> scores);
inline double total_variation(const ScoreVector& scores) {
  return total_variation(scores.values());
}

}  // namespace isomech
