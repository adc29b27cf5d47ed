#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "isomech/error.hpp"
#include "isomech/isotonic.hpp"

namespace isomech {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_inputs(const ScoreVector& y, const Ranking& ranking, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::LambdaOutOfRange, "lambda must be finite and > 0");
  }
  if (ranking.size() != y.size()) {
    throw Error(ErrorKind::InvalidRanking,
                "ranking covers " + std::to_string(ranking.size()) + " items but there are " +
                    std::to_string(y.size()) + " scores");
  }
}

// Solution path of
//   min 0.5 ||w - b||^2 + lambda * sum_k (b[k+1] - b[k])_+
// over lambda. Adjacent coordinates that fuse stay fused, every group moves
// linearly between fusion events with slope
//   (violates_right - violates_left) / group_size,
// and a violated pair (right neighbour above) is the only source of motion.
class PenalizedPath {
 public:
  explicit PenalizedPath(std::span<const double> w) : n_(w.size()) {
    for (std::size_t i = 0; i < n_;) {
      std::size_t j = i + 1;
      double sum = w[i];
      while (j < n_ && w[j] == w[i]) sum += w[j++];
      Group g;
      g.start = i;
      g.size = j - i;
      g.value = sum / static_cast<double>(g.size);
      groups_.push_back(g);
      i = j;
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      groups_[g].prev = g == 0 ? kNone : g - 1;
      groups_[g].next = g + 1 == groups_.size() ? kNone : g + 1;
      groups_[g].violates_right =
          groups_[g].next != kNone && groups_[g + 1].value > groups_[g].value;
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) update_slope(g);
    for (std::size_t g = 0; g < groups_.size(); ++g) schedule(g, 0.0);
  }

  std::vector<double> solve(double lambda) {
    while (!events_.empty() && events_.top().lambda <= lambda) {
      const Event e = events_.top();
      events_.pop();
      const Group& g = groups_[e.left];
      if (!g.alive || g.version != e.left_version || g.next == kNone ||
          groups_[g.next].version != e.right_version) {
        continue;
      }
      merge(e.left, e.lambda);
    }

    std::vector<double> out(n_);
    for (const Group& g : groups_) {
      if (!g.alive) continue;
      std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(g.start), g.size,
                  value_at(g, lambda));
    }
    return out;
  }

 private:
  struct Group {
    std::size_t start = 0;
    std::size_t size = 0;
    double value = 0.0;  // value at lambda_ref
    double lambda_ref = 0.0;
    double slope = 0.0;
    std::size_t prev = kNone;
    std::size_t next = kNone;
    bool violates_right = false;
    bool alive = true;
    std::uint64_t version = 0;
  };

  struct Event {
    double lambda;
    std::size_t left;
    std::uint64_t left_version;
    std::uint64_t right_version;
    bool operator>(const Event& o) const {
      return lambda != o.lambda ? lambda > o.lambda : left > o.left;
    }
  };

  static double value_at(const Group& g, double lambda) {
    return g.value + g.slope * (lambda - g.lambda_ref);
  }

  void update_slope(std::size_t gi) {
    Group& g = groups_[gi];
    const int right = g.violates_right ? 1 : 0;
    const int left = g.prev != kNone && groups_[g.prev].violates_right ? 1 : 0;
    g.slope = static_cast<double>(right - left) / static_cast<double>(g.size);
  }

  // Queue the moment the pair (gi, next) meets, if it ever does.
  void schedule(std::size_t gi, double now) {
    const Group& g = groups_[gi];
    if (g.next == kNone) return;
    const Group& h = groups_[g.next];
    const double gap = value_at(g, now) - value_at(h, now);
    const double closing = g.slope - h.slope;
    double when;
    if (g.violates_right) {
      if (!(closing > 0.0)) return;
      when = now + std::max(0.0, -gap) / closing;
    } else {
      if (!(closing < 0.0)) return;
      when = now + std::max(0.0, gap) / -closing;
    }
    events_.push({when, gi, g.version, h.version});
  }

  void merge(std::size_t gi, double lambda) {
    Group& g = groups_[gi];
    Group& h = groups_[g.next];
    const double total = static_cast<double>(g.size + h.size);
    const double merged = (static_cast<double>(g.size) * value_at(g, lambda) +
                           static_cast<double>(h.size) * value_at(h, lambda)) /
                          total;
    g.value = merged;
    g.lambda_ref = lambda;
    g.size += h.size;
    g.violates_right = h.violates_right;
    g.next = h.next;
    if (g.next != kNone) groups_[g.next].prev = gi;
    h.alive = false;
    ++h.version;
    ++g.version;
    update_slope(gi);
    if (g.prev != kNone) schedule(g.prev, lambda);
    schedule(gi, lambda);
  }

  std::size_t n_;
  std::vector<Group> groups_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
};

}  // namespace

ScoreVector solve_penalized(const ScoreVector& y, const Ranking& ranking, double lambda) {
  check_inputs(y, ranking, lambda);
  const std::vector<double> ranked = ranking.permute(y.values());
  PenalizedPath path(ranked);
  return ScoreVector(ranking.unpermute(path.solve(lambda)));
}

ScoreVector solve_penalized_iterative(const ScoreVector& y, const Ranking& ranking,
                                      double lambda, IterativeOptions options) {
  check_inputs(y, ranking, lambda);
  const std::vector<double> w = ranking.permute(y.values());
  const std::size_t n = w.size();
  if (n == 1) return y;

  const std::size_t m = n - 1;
  // dual variable u in [0, lambda]^m; primal r(u) = w - D^T u with
  // (D r)_k = r[k+1] - r[k].
  std::vector<double> u(m, 0.0), u_prev(m, 0.0), v(m, 0.0), r(n), dr(m);
  auto primal_from = [&](const std::vector<double>& dual) {
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i > 0 ? dual[i - 1] : 0.0;
      const double right = i < m ? dual[i] : 0.0;
      r[i] = w[i] - (left - right);
    }
    for (std::size_t k = 0; k < m; ++k) dr[k] = r[k + 1] - r[k];
  };

  double scale = 1.0;
  for (double x : w) scale += x * x;
  const double step = 0.25;  // 1 / ||D D^T||, which is < 4
  double momentum = 1.0;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    primal_from(v);
    u_prev = u;
    for (std::size_t k = 0; k < m; ++k) u[k] = std::clamp(v[k] + step * dr[k], 0.0, lambda);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / next_momentum;
    for (std::size_t k = 0; k < m; ++k) v[k] = u[k] + beta * (u[k] - u_prev[k]);
    momentum = next_momentum;

    if (it % 16 == 0) {
      primal_from(u);
      double gap = 0.0;
      for (std::size_t k = 0; k < m; ++k) gap += lambda * std::max(0.0, dr[k]) - u[k] * dr[k];
      if (gap <= options.gap_tolerance * scale) {
        return ScoreVector(ranking.unpermute(r));
      }
    }
  }
  throw Error(ErrorKind::NoConvergence,
              "dual projected gradient did not reach the requested duality gap in " +
                  std::to_string(options.max_iterations) + " iterations");
}

}  // namespace isomech
