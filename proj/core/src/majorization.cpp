#include "isomech/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "isomech/error.hpp"

namespace isomech {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::LengthMismatch,
                "lengths " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

bool nonincreasing(std::span<const double> v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1]) return false;
  }
  return true;
}

}  // namespace

bool majorizes(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size());
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  const double tol = 1e-9 * (1.0 + l1);

  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    if (k + 1 < x.size() && sx < sy - tol) return false;
  }
  return std::abs(sx - sy) <= tol;
}

bool majorizes(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  require_same_length(x.size(), y.size());
  std::int64_t sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    if (k + 1 < x.size() && sx < sy) return false;
  }
  return sx == sy;
}

ScoreVector apply_upward_swap(const ScoreVector& z, const SwapStep& step) {
  if (step.i >= step.j) {
    throw Error(ErrorKind::IndexOrder, "swap needs i < j, got i=" + std::to_string(step.i) +
                                           ", j=" + std::to_string(step.j));
  }
  if (step.j >= z.size()) {
    throw Error(ErrorKind::OutOfRange, "swap index " + std::to_string(step.j) + " out of range",
                step.j);
  }
  if (!(step.mass >= 0.0)) throw Error(ErrorKind::NegativeMass, "swap mass must be >= 0");
  std::vector<double> out(z.begin(), z.end());
  out[step.i] += step.mass;
  out[step.j] -= step.mass;
  return ScoreVector(std::move(out));
}

std::optional<std::vector<SwapStep>> decompose_swaps(const ScoreVector& x,
                                                     const ScoreVector& y) {
  if (!majorizes(x, y)) throw Error(ErrorKind::NotMajorized, "x does not majorize y");

  const std::size_t n = x.size();
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  const double tol = 1e-12 * (1.0 + l1);

  std::vector<double> z(y.begin(), y.end());
  std::vector<SwapStep> steps;
  std::size_t i = 0;
  while (true) {
    while (i < n && z[i] >= x[i] - tol) ++i;
    if (i == n) break;
    std::size_t j = i + 1;
    while (j < n && z[j] <= x[j] + tol) ++j;
    if (j == n) return std::nullopt;
    const double mass = std::min(x[i] - z[i], z[j] - x[j]);
    z[i] += mass;
    z[j] -= mass;
    steps.push_back({i, j, mass});
    if (steps.size() > 2 * n) return std::nullopt;
  }
  return steps;
}

Ranking upward_shuffle(const Ranking& ranking, std::span<const double> true_scores,
                       std::size_t i, std::size_t j) {
  if (!(i < j && j < ranking.size())) {
    throw Error(ErrorKind::PreconditionViolated, "shuffle needs positions i < j < n");
  }
  if (!(true_scores[ranking[j]] > true_scores[ranking[i]])) {
    throw Error(ErrorKind::PreconditionViolated,
                "an upward shuffle must move the larger true score earlier");
  }
  std::vector<std::size_t> order(ranking.order().begin(), ranking.order().end());
  std::swap(order[i], order[j]);
  return Ranking(std::move(order));
}

SchurReport check_schur_convex(const VectorFunction& f, std::size_t n, std::size_t trials,
                               std::uint64_t seed, double scale) {
  SchurReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-scale, scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto tolerance = [](double fx) { return 1e-6 * (1.0 + std::abs(fx)); };
  auto draw = [&] {
    std::vector<double> v(n);
    for (double& c : v) c = coord(rng);
    return v;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    // Symmetry.
    std::vector<double> r = draw();
    std::vector<double> shuffled = r;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const double fr = f(r);
    if (std::abs(f(shuffled) - fr) > tolerance(fr)) {
      std::ostringstream os;
      os << "f changes under a coordinate permutation (trial " << t << ")";
      report.violations.push_back({SchurViolation::Kind::Symmetry, os.str()});
    }

    // Order: y = a x + (1 - a) rho(x) is majorized by x once both are sorted.
    std::vector<double> x = draw();
    std::sort(x.begin(), x.end(), std::greater<>());
    std::vector<double> rho = x;
    std::shuffle(rho.begin(), rho.end(), rng);
    const double a = unit(rng);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = a * x[k] + (1.0 - a) * rho[k];
    std::sort(y.begin(), y.end(), std::greater<>());
    ++report.order_pairs;
    const double fx = f(x), fy = f(y);
    if (fx < fy - tolerance(std::max(std::abs(fx), std::abs(fy)))) {
      std::ostringstream os;
      os << "f(x) = " << fx << " < f(y) = " << fy << " for sorted x majorizing y (trial " << t
         << ")";
      report.violations.push_back({SchurViolation::Kind::Order, os.str()});
    }

    // Gradient criterion at a random point, on a random coordinate pair.
    if (n >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      auto partial = [&](std::size_t k) {
        const double h = 1e-5 * std::max(1.0, std::abs(r[k]));
        std::vector<double> up = r, down = r;
        up[k] += h;
        down[k] -= h;
        return (f(up) - f(down)) / (2.0 * h);
      };
      const double criterion = (r[i] - r[j]) * (partial(i) - partial(j));
      ++report.gradient_probes;
      if (criterion < -tolerance(fr)) {
        std::ostringstream os;
        os << "(r_i - r_j)(d_i f - d_j f) = " << criterion << " at i=" << i << ", j=" << j
           << " (trial " << t << ")";
        report.violations.push_back({SchurViolation::Kind::Gradient, os.str()});
      }
    }
  }
  return report;
}

bool check_hlp(const ScalarFunction& f, std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size());
  if (!nonincreasing(x) || !nonincreasing(y)) {
    throw Error(ErrorKind::PreconditionViolated, "both vectors must be nonincreasing");
  }
  if (!majorizes(x, y)) throw Error(ErrorKind::PreconditionViolated, "x does not majorize y");
  double fx = 0.0, fy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    fx += f(x[k]);
    fy += f(y[k]);
  }
  return fx >= fy - 1e-9;
}

}  // namespace isomech
