#include "isomech/utility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "isomech/error.hpp"

namespace isomech {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double checked(double total) {
  if (!std::isfinite(total)) throw Error(ErrorKind::NonFiniteScore, "utility is not finite");
  return total;
}

std::vector<double> sample_points(double lo, double hi) {
  std::vector<double> pts;
  constexpr int kGrid = 200;
  for (int k = 0; k <= kGrid; ++k) pts.push_back(lo + (hi - lo) * k / kGrid);
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> u(lo, hi);
  for (int k = 0; k < 200; ++k) pts.push_back(u(rng));
  std::sort(pts.begin(), pts.end());
  return pts;
}

void check_monotone_convex(const ScalarFn& U, const std::string& name, double lo, double hi,
                           bool require_nonnegative) {
  const std::vector<double> pts = sample_points(lo, hi);
  std::vector<double> vals(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) vals[k] = U(pts[k]);
  auto fail = [&](const std::string& what, double at) {
    std::ostringstream os;
    os << name << " is not " << what << " near r = " << at;
    throw Error(ErrorKind::InvalidParameter, os.str());
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double scale = 1e-9 * (1.0 + std::abs(vals[k]));
    if (require_nonnegative && vals[k] < -scale) fail("nonnegative", pts[k]);
    if (k > 0 && vals[k] < vals[k - 1] - scale) fail("nondecreasing", pts[k]);
  }
  std::mt19937_64 rng(0xc0ffeeULL);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = pts[pick(rng)], b = pts[pick(rng)];
    const double ua = U(a), ub = U(b);
    const double mid = U(0.5 * (a + b));
    if (mid > 0.5 * (ua + ub) + 1e-9 * (1.0 + std::abs(ua) + std::abs(ub))) {
      fail("convex", 0.5 * (a + b));
    }
  }
}

void check_monotone(const ScalarFn& h, const std::string& name, double lo, double hi) {
  const std::vector<double> pts = sample_points(lo, hi);
  double prev = h(pts.front());
  for (double p : pts) {
    const double v = h(p);
    if (v < -1e-12) {
      throw Error(ErrorKind::InvalidParameter, name + " must be nonnegative");
    }
    if (v < prev - 1e-9 * (1.0 + std::abs(prev))) {
      throw Error(ErrorKind::InvalidParameter, name + " must be nondecreasing");
    }
    prev = v;
  }
}

double param(const Params& p, const std::string& family, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) {
    throw Error(ErrorKind::InvalidParameter, family + " needs parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace

std::string describe(const UtilitySpec& spec) {
  return std::visit(overloaded{
                        [](const SeparableConvex& s) { return s.name; },
                        [](const Thresholded& t) {
                          std::ostringstream os;
                          os << "thresholded(u=" << t.u << ", r0=" << t.r0 << ")";
                          return os.str();
                        },
                        [](const ScoreDependent& s) {
                          return "score-dependent(" + s.g_name + ", " + s.h_name + ")";
                        },
                        [](const SchurNonseparable& s) { return s.name; },
                    },
                    spec);
}

bool needs_true_scores(const UtilitySpec& spec) {
  return std::holds_alternative<ScoreDependent>(spec);
}

double eval_utility(const UtilitySpec& spec, std::span<const double> adjusted) {
  if (needs_true_scores(spec)) {
    throw Error(ErrorKind::MissingTrueScores, "score-dependent utility needs the true scores");
  }
  return eval_utility(spec, adjusted, {});
}

double eval_utility(const UtilitySpec& spec, std::span<const double> adjusted,
                    std::span<const double> true_scores) {
  return checked(std::visit(
      overloaded{
          [&](const SeparableConvex& s) {
            double acc = 0.0;
            for (double r : adjusted) acc += s.U(r);
            return acc;
          },
          [&](const Thresholded& t) {
            double acc = 0.0;
            for (double r : adjusted) acc += r >= t.r0 ? t.u : 0.0;
            return acc;
          },
          [&](const ScoreDependent& s) {
            if (true_scores.size() != adjusted.size()) {
              throw Error(ErrorKind::MissingTrueScores,
                          "score-dependent utility needs one true score per item");
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < adjusted.size(); ++i) {
              acc += s.g(adjusted[i]) * s.h(true_scores[i]);
            }
            return acc;
          },
          [&](const SchurNonseparable& s) { return s.f(adjusted); },
      },
      spec));
}

void validate_utility(const UtilitySpec& spec, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidParameter, "validation range must have lo < hi");
  std::visit(overloaded{
                 [&](const SeparableConvex& s) { check_monotone_convex(s.U, s.name, lo, hi, false); },
                 [](const Thresholded&) {},
                 [&](const ScoreDependent& s) {
                   check_monotone_convex(s.g, s.g_name, lo, hi, true);
                   check_monotone(s.h, s.h_name, lo, hi);
                 },
                 [](const SchurNonseparable&) {},
             },
             spec);
}

UtilitySpec hinge_linear(double a, double b) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidParameter, "hinge-linear needs a > 0");
  std::ostringstream os;
  os << "hinge-linear(a=" << a << ", b=" << b << ")";
  return SeparableConvex{os.str(), [a, b](double r) { return std::max(0.0, a * r + b); }};
}

UtilitySpec hinge_exponential(double a, double b, double c) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidParameter, "hinge-exponential needs a > 0");
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "hinge-exponential needs c > 0");
  std::ostringstream os;
  os << "hinge-exponential(a=" << a << ", b=" << b << ", c=" << c << ")";
  return SeparableConvex{os.str(),
                         [a, b, c](double r) { return std::max(0.0, std::exp(a * r + b) - c); }};
}

UtilitySpec square_plus() {
  return SeparableConvex{"square-plus", [](double r) {
                           const double p = std::max(0.0, r);
                           return p * p;
                         }};
}

UtilitySpec max_coordinate() {
  return SchurNonseparable{"max-coordinate", [](std::span<const double> r) {
                             return *std::max_element(r.begin(), r.end());
                           }};
}

UtilitySpec thresholded(double u, double r0) {
  if (!(u > 0.0)) throw Error(ErrorKind::InvalidParameter, "thresholded needs u > 0");
  return Thresholded{u, r0};
}

UtilitySpec score_dependent(const UtilitySpec& g, const UtilitySpec& h) {
  const auto* gs = std::get_if<SeparableConvex>(&g);
  const auto* hs = std::get_if<SeparableConvex>(&h);
  if (!gs || !hs) {
    throw Error(ErrorKind::InvalidParameter,
                "score-dependent factors must both be separable families");
  }
  return ScoreDependent{gs->name, gs->U, hs->name, hs->U};
}

UtilitySpec separable(std::string name, ScalarFn U, double lo, double hi) {
  UtilitySpec spec = SeparableConvex{std::move(name), std::move(U)};
  validate_utility(spec, lo, hi);
  return spec;
}

const std::vector<UtilityFamily>& builtin_utilities() {
  static const std::vector<UtilityFamily> catalog = {
      {"hinge-linear", {"a", "b"},
       [](const Params& p) {
         return hinge_linear(param(p, "hinge-linear", "a"), param(p, "hinge-linear", "b"));
       }},
      {"hinge-exponential", {"a", "b", "c"},
       [](const Params& p) {
         return hinge_exponential(param(p, "hinge-exponential", "a"),
                                  param(p, "hinge-exponential", "b"),
                                  param(p, "hinge-exponential", "c"));
       }},
      {"square-plus", {}, [](const Params&) { return square_plus(); }},
      {"max-coordinate", {}, [](const Params&) { return max_coordinate(); }},
      {"thresholded", {"u", "r0"},
       [](const Params& p) {
         return thresholded(param(p, "thresholded", "u"), param(p, "thresholded", "r0"));
       }},
  };
  return catalog;
}

UtilitySpec make_utility(const std::string& family, const Params& params) {
  for (const auto& f : builtin_utilities()) {
    if (f.name == family) return f.make(params);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown utility family '" + family + "'");
}

}  // namespace isomech
