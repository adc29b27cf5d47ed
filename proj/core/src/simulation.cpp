#include "isomech/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "isomech/error.hpp"
#include "isomech/isotonic.hpp"
#include "isomech/majorization.hpp"

namespace isomech {

namespace {

constexpr std::size_t kChunk = 256;

// Runs fn(begin, end) over fixed-size chunks of [0, trials) on a small thread
// pool and returns the per-chunk results in chunk order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::size_t trials, unsigned threads, Fn&& fn) {
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Result> results(chunks);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        results[c] = fn(c * kChunk, std::min(trials, (c + 1) * kChunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

double squared_error(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Ranked true scores (full) or per-block descending true scores (block).
std::vector<std::vector<double>> pattern(const OwnerReport& report,
                                         std::span<const double> true_scores) {
  if (const auto* r = std::get_if<Ranking>(&report)) return {r->permute(true_scores)};
  const auto& partition = std::get<BlockPartition>(report);
  std::vector<std::vector<double>> out;
  for (const auto& block : partition.blocks()) {
    std::vector<double> vals;
    for (std::size_t i : block) vals.push_back(true_scores[i]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    out.push_back(std::move(vals));
  }
  return out;
}

double widest_sd(const NoiseModel& model) {
  if (const auto* base = std::get_if<PermutedBase>(&model)) {
    return *std::max_element(base->scales.begin(), base->scales.end());
  }
  return marginal_sd(model);
}

void validate_plan(const TrialPlan& plan) {
  const std::size_t n = plan.true_scores.size();
  if (plan.trials == 0) throw Error(ErrorKind::InvalidPlan, "trials must be >= 1");
  if (plan.strategies.empty()) throw Error(ErrorKind::InvalidPlan, "no strategies to compare");
  const bool block = plan.mechanism.variant() == Variant::Block;
  const std::uint64_t bound = block ? kMaxBlockStrategies : kMaxFullStrategies;
  if (plan.strategies.size() > bound) {
    throw Error(ErrorKind::TooManyStrategies,
                std::to_string(plan.strategies.size()) + " strategies exceed the bound of " +
                    std::to_string(bound),
                plan.strategies.size());
  }
  for (std::size_t s = 0; s < plan.strategies.size(); ++s) {
    const OwnerReport& report = plan.strategies[s];
    if (report_size(report) != n) {
      throw Error(ErrorKind::InvalidPlan, "strategy " + std::to_string(s) + " covers " +
                                              std::to_string(report_size(report)) +
                                              " items, expected " + std::to_string(n));
    }
    if (std::holds_alternative<BlockPartition>(report) != block) {
      throw Error(ErrorKind::InvalidPlan,
                  "strategy " + std::to_string(s) + " does not match the '" +
                      to_string(plan.mechanism.variant()) + "' variant");
    }
  }
  if (plan.reference && *plan.reference >= plan.strategies.size()) {
    throw Error(ErrorKind::InvalidPlan, "reference strategy index out of range");
  }
  validate_noise(plan.noise);
  if (const auto* base = std::get_if<PermutedBase>(&plan.noise); base && base->scales.size() != n) {
    throw Error(ErrorKind::InvalidPlan, "permuted-base noise needs one scale per item");
  }
  const double sd = widest_sd(plan.noise);
  auto [lo, hi] = std::minmax_element(plan.true_scores.begin(), plan.true_scores.end());
  validate_utility(plan.utility, *lo - 3.0 * sd - 1.0, *hi + 3.0 * sd + 1.0);
}

struct ComparisonChunk {
  std::vector<RunningStats> utility, sq_error, gap;
  std::vector<double> worst_excess;
  RunningStats raw;
  std::vector<TrialRecord> records;
};

}  // namespace

void RunningStats::add(double x) noexcept {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count + other.count);
  const double delta = other.mean - mean;
  mean += delta * static_cast<double>(other.count) / total;
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / total;
  count += other.count;
}

double RunningStats::variance() const noexcept {
  return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double RunningStats::std_err() const noexcept {
  return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

std::uint64_t count_strategies(StrategyKind kind, std::size_t n,
                               const std::vector<std::size_t>& sizes) {
  constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t acc = 1;
  if (kind == StrategyKind::Full) {
    for (std::uint64_t k = 2; k <= n; ++k) {
      if (acc > kSaturated / k) return kSaturated;
      acc *= k;
    }
    return acc;
  }
  // Multinomial as a product of binomials C(placed + size, size); each
  // partial product acc * (placed + k) / k is an integer.
  std::uint64_t placed = 0;
  for (std::size_t size : sizes) {
    for (std::uint64_t k = 1; k <= size; ++k) {
      const std::uint64_t g = std::gcd(acc, k);
      const std::uint64_t factor = (placed + k) / (k / g);
      if ((acc / g) > kSaturated / factor) return kSaturated;
      acc = (acc / g) * factor;
    }
    placed += size;
  }
  return acc;
}

std::vector<OwnerReport> enumerate_strategies(StrategyKind kind, std::size_t n,
                                              const std::vector<std::size_t>& sizes) {
  if (n == 0) throw Error(ErrorKind::EmptyInput, "need at least one item");
  std::vector<OwnerReport> out;
  if (kind == StrategyKind::Full) {
    const std::uint64_t count = count_strategies(kind, n);
    if (count > kMaxFullStrategies) {
      throw Error(ErrorKind::CombinatorialBlowup,
                  std::to_string(n) + "! = " + std::to_string(count) + " rankings exceed " +
                      std::to_string(kMaxFullStrategies),
                  count);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      out.emplace_back(Ranking(order));
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
  }

  if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != n ||
      std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
    throw Error(ErrorKind::InvalidPartition, "block sizes must be positive and sum to n");
  }
  const std::uint64_t count = count_strategies(kind, n, sizes);
  if (count > kMaxBlockStrategies) {
    throw Error(ErrorKind::CombinatorialBlowup,
                std::to_string(count) + " ordered partitions exceed " +
                    std::to_string(kMaxBlockStrategies),
                count);
  }
  std::vector<std::size_t> labels;
  for (std::size_t k = 0; k < sizes.size(); ++k) labels.insert(labels.end(), sizes[k], k);
  do {
    std::vector<std::vector<std::size_t>> blocks(sizes.size());
    for (std::size_t i = 0; i < n; ++i) blocks[labels[i]].push_back(i);
    out.emplace_back(BlockPartition(std::move(blocks)));
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

bool is_truthful(const OwnerReport& report, std::span<const double> true_scores) {
  const auto p = pattern(report, true_scores);
  if (std::holds_alternative<Ranking>(report)) {
    const auto& ranked = p.front();
    return std::is_sorted(ranked.begin(), ranked.end(), std::greater<>());
  }
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (p[k].back() < p[k + 1].front()) return false;
  }
  return true;
}

bool tie_equivalent(const OwnerReport& a, const OwnerReport& b,
                    std::span<const double> true_scores) {
  if (a.index() != b.index()) return false;
  return pattern(a, true_scores) == pattern(b, true_scores);
}

TrialReport run_strategy_comparison(const TrialPlan& plan, unsigned threads) {
  validate_plan(plan);
  const std::size_t n = plan.true_scores.size();
  const std::size_t S = plan.strategies.size();
  const auto R = plan.true_scores.values();

  TrialReport report;
  report.trials = plan.trials;
  std::vector<bool> truthful(S);
  for (std::size_t s = 0; s < S; ++s) truthful[s] = is_truthful(plan.strategies[s], R);
  if (plan.reference) {
    report.reference = *plan.reference;
  } else {
    const auto it = std::find(truthful.begin(), truthful.end(), true);
    report.reference = it == truthful.end() ? 0 : static_cast<std::size_t>(it - truthful.begin());
  }
  report.reference_is_truthful = truthful[report.reference];
  const std::size_t ref = report.reference;

  auto chunks = run_chunks<ComparisonChunk>(plan.trials, threads, [&](std::size_t begin,
                                                                      std::size_t end) {
    ComparisonChunk c;
    c.utility.resize(S);
    c.sq_error.resize(S);
    c.gap.resize(S);
    c.worst_excess.assign(S, -std::numeric_limits<double>::infinity());
    std::vector<double> y(n), utilities(S);
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t seed = trial_seed(plan.master_seed, t);
      const ScoreVector z = sample_noise(plan.noise, n, seed);
      for (std::size_t i = 0; i < n; ++i) y[i] = R[i] + z[i];
      const ScoreVector raw(y);
      const double raw_sq = squared_error(y, R);
      c.raw.add(raw_sq);

      TrialRecord record;
      if (plan.keep_records) {
        record.trial = t;
        record.seed = seed;
        record.noise.assign(z.begin(), z.end());
      }
      for (std::size_t s = 0; s < S; ++s) {
        const MechanismOutcome out = run_mechanism(raw, plan.strategies[s], plan.mechanism);
        utilities[s] = eval_utility(plan.utility, out.adjusted.values(), R);
        const double sq = squared_error(out.adjusted.values(), R);
        c.utility[s].add(utilities[s]);
        c.sq_error[s].add(sq);
        c.worst_excess[s] = std::max(c.worst_excess[s], sq - raw_sq);
        if (plan.keep_records) {
          record.adjusted.emplace_back(out.adjusted.begin(), out.adjusted.end());
          record.utilities.push_back(utilities[s]);
          record.sq_errors.push_back(sq);
        }
      }
      for (std::size_t s = 0; s < S; ++s) c.gap[s].add(utilities[ref] - utilities[s]);
      if (plan.keep_records) c.records.push_back(std::move(record));
    }
    return c;
  });

  std::vector<RunningStats> utility(S), sq_error(S), gap(S);
  std::vector<double> worst(S, -std::numeric_limits<double>::infinity());
  RunningStats raw;
  for (auto& c : chunks) {
    for (std::size_t s = 0; s < S; ++s) {
      utility[s].merge(c.utility[s]);
      sq_error[s].merge(c.sq_error[s]);
      gap[s].merge(c.gap[s]);
      worst[s] = std::max(worst[s], c.worst_excess[s]);
    }
    raw.merge(c.raw);
    for (auto& r : c.records) report.records.push_back(std::move(r));
  }

  report.raw_sq_error = raw.mean;
  report.raw_sq_error_std_err = raw.std_err();
  report.strategies.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    StrategySummary& out = report.strategies[s];
    out.mean_utility = utility[s].mean;
    out.std_err = utility[s].std_err();
    out.mean_sq_error = sq_error[s].mean;
    out.sq_error_std_err = sq_error[s].std_err();
    out.paired_gap = gap[s].mean;
    out.gap_std_err = gap[s].std_err();
    out.worst_excess_over_raw = worst[s];
    out.truthful = truthful[s];
    out.tie_equivalent_to_reference =
        tie_equivalent(plan.strategies[s], plan.strategies[ref], R);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < S; ++s) {
    if (report.strategies[s].mean_utility > report.strategies[best].mean_utility) best = s;
  }
  report.argmax = best;
  report.truthful_is_argmax =
      report.reference_is_truthful && report.strategies[best].tie_equivalent_to_reference;
  return report;
}

ScoreVector equally_spaced_scores(std::size_t n, double spread) {
  if (n == 0) throw Error(ErrorKind::EmptyInput, "need at least one item");
  std::vector<double> r(n, 0.0);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = spread * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
    }
  }
  return ScoreVector(std::move(r));
}

std::vector<RiskRow> run_risk_scaling(const std::vector<std::size_t>& n_grid, double sigma,
                                      double spread, std::size_t trials, std::uint64_t seed,
                                      unsigned threads) {
  if (n_grid.empty()) throw Error(ErrorKind::InvalidGrid, "empty n grid");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] == 0) throw Error(ErrorKind::InvalidGrid, "grid contains n = 0");
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) {
      throw Error(ErrorKind::InvalidGrid, "grid must be strictly ascending");
    }
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidParameter, "sigma must be > 0");
  }
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    throw Error(ErrorKind::InvalidParameter, "V must be > 0");
  }
  if (trials == 0) throw Error(ErrorKind::InvalidParameter, "trials must be >= 1");

  struct RiskChunk {
    RunningStats mechanism, raw;
  };
  const NoiseModel noise = IidGaussian{sigma};
  std::vector<RiskRow> rows;
  for (std::size_t n : n_grid) {
    const ScoreVector R = equally_spaced_scores(n, spread);
    const std::uint64_t grid_seed = trial_seed(seed, n);
    auto chunks = run_chunks<RiskChunk>(trials, threads, [&](std::size_t begin, std::size_t end) {
      RiskChunk c;
      std::vector<double> y(n), fitted(n);
      std::mt19937_64 rng;
      for (std::size_t t = begin; t < end; ++t) {
        rng.seed(trial_seed(grid_seed, t));
        sample_noise_into(noise, rng, y);
        double raw_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          raw_sq += y[i] * y[i];
          y[i] += R[i];
        }
        // R is nonincreasing, so the true ranking is the identity.
        for (const Pool& p : pava_nonincreasing(y)) {
          std::fill(fitted.begin() + static_cast<std::ptrdiff_t>(p.start),
                    fitted.begin() + static_cast<std::ptrdiff_t>(p.end), p.value);
        }
        c.mechanism.add(squared_error(fitted, R.values()));
        c.raw.add(raw_sq);
      }
      return c;
    });
    RunningStats mech, raw;
    for (const auto& c : chunks) {
      mech.merge(c.mechanism);
      raw.merge(c.raw);
    }
    RiskRow row;
    row.n = n;
    row.mechanism_risk = mech.mean;
    row.mechanism_risk_std_err = mech.std_err();
    row.raw_risk = raw.mean;
    row.raw_risk_std_err = raw.std_err();
    row.normalizer = std::cbrt(static_cast<double>(n)) * std::pow(sigma, 4.0 / 3.0) *
                     std::pow(spread, 2.0 / 3.0);
    row.ratio = row.mechanism_risk / row.normalizer;
    row.ratio_std_err = row.mechanism_risk_std_err / row.normalizer;
    rows.push_back(row);
  }
  return rows;
}

FaithfulnessComparison run_faithfulness_pair(const ScoreVector& true_scores,
                                             const Ranking& first, const Ranking& second,
                                             const NoiseModel& noise, const UtilitySpec& utility,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads) {
  if (first.size() != true_scores.size() || second.size() != true_scores.size()) {
    throw Error(ErrorKind::InvalidRanking, "rankings must cover every item");
  }
  if (!majorizes(first.permute(true_scores.values()), second.permute(true_scores.values()))) {
    throw Error(ErrorKind::NotFaithfulPair,
                "the first ranking is not more faithful than the second");
  }
  TrialPlan plan{true_scores, noise,    utility, MechanismConfig::hard(),
                 {first, second}, trials, seed, std::size_t{0}};
  const TrialReport report = run_strategy_comparison(plan, threads);
  FaithfulnessComparison out;
  out.first = report.strategies[0];
  out.second = report.strategies[1];
  out.gap = report.strategies[1].paired_gap;
  out.gap_std_err = report.strategies[1].gap_std_err;
  return out;
}

}  // namespace isomech
