#include "isomech/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "isomech/error.hpp"

namespace isomech {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

void sample_noise_into(const NoiseModel& model, std::mt19937_64& rng, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (const auto* iid = std::get_if<IidGaussian>(&model)) {
    for (double& z : out) z = iid->sigma * normal(rng);
  } else if (const auto* latent = std::get_if<ExchangeableLatent>(&model)) {
    const double shared = latent->tau * normal(rng);
    for (double& z : out) z = shared + latent->sigma * normal(rng);
  } else {
    const auto& base = std::get<PermutedBase>(model);
    if (base.scales.size() != out.size()) {
      throw Error(ErrorKind::InvalidParameter,
                  "permuted-base has " + std::to_string(base.scales.size()) +
                      " scales for " + std::to_string(out.size()) + " coordinates");
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = base.scales[k] * normal(rng);
    std::shuffle(out.begin(), out.end(), rng);
  }
}

ScoreVector sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
  validate_noise(model);
  std::mt19937_64 rng(seed);
  std::vector<double> z(n);
  sample_noise_into(model, rng, z);
  return ScoreVector(std::move(z));
}

double marginal_sd(const NoiseModel& model) {
  if (const auto* iid = std::get_if<IidGaussian>(&model)) return iid->sigma;
  if (const auto* latent = std::get_if<ExchangeableLatent>(&model)) {
    return std::hypot(latent->sigma, latent->tau);
  }
  const auto& base = std::get<PermutedBase>(model);
  double acc = 0.0;
  for (double s : base.scales) acc += s * s;
  return std::sqrt(acc / static_cast<double>(base.scales.size()));
}

}  // namespace isomech
