#pragma once

// Owner utility functions: separable convex sums, the thresholded step used
// as a negative control, true-score-dependent products g(r) h(R), and
// arbitrary symmetric (Schur-convex) functions of the whole vector.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "isomech/types.hpp"

namespace isomech {

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<double(std::span<const double>)>;

// Util(r) = sum_i U(r_i) with U nondecreasing and convex.
struct SeparableConvex {
  std::string name;
  ScalarFn U;
};

// U(r) = u if r >= r0 else 0. Not convex.
struct Thresholded {
  double u = 1.0;
  double r0 = 0.0;
};

// Util(r; R) = sum_i g(r_i) h(R_i), g >= 0 convex, h >= 0 nondecreasing.
struct ScoreDependent {
  std::string g_name;
  ScalarFn g;
  std::string h_name;
  ScalarFn h;
};

// Any symmetric function of the adjusted vector.
struct SchurNonseparable {
  std::string name;
  VectorFn f;
};

using UtilitySpec = std::variant<SeparableConvex, Thresholded, ScoreDependent, SchurNonseparable>;

std::string describe(const UtilitySpec& spec);
bool needs_true_scores(const UtilitySpec& spec);

// Throws MissingTrueScores for ScoreDependent, NonFiniteScore if the total is
// not finite.
double eval_utility(const UtilitySpec& spec, std::span<const double> adjusted);
double eval_utility(const UtilitySpec& spec, std::span<const double> adjusted,
                    std::span<const double> true_scores);
inline double eval_utility(const UtilitySpec& spec, const ScoreVector& adjusted) {
  return eval_utility(spec, adjusted.values());
}
inline double eval_utility(const UtilitySpec& spec, const ScoreVector& adjusted,
                           const ScoreVector& true_scores) {
  return eval_utility(spec, adjusted.values(), true_scores.values());
}

// Sampled checks over [lo, hi] (grid plus random points): separable U
// nondecreasing and midpoint-convex to 1e-9; score-dependent g convex and
// >= 0, h nondecreasing and >= 0 on the same range. Thresholded and
// non-separable kinds pass through. Throws InvalidParameter on violation.
void validate_utility(const UtilitySpec& spec, double lo, double hi);

// Parametric families ---------------------------------------------------------

// max(0, a r + b), a > 0.
UtilitySpec hinge_linear(double a, double b);
// max(0, exp(a r + b) - c), a > 0, c > 0.
UtilitySpec hinge_exponential(double a, double b, double c);
// max(0, r)^2.
UtilitySpec square_plus();
// max_i r_i.
UtilitySpec max_coordinate();
// u * 1[r >= r0], u > 0.
UtilitySpec thresholded(double u, double r0);
// g(r) h(R); both factors come from separable families.
UtilitySpec score_dependent(const UtilitySpec& g, const UtilitySpec& h);
// Wraps an arbitrary U, validated on [lo, hi].
UtilitySpec separable(std::string name, ScalarFn U, double lo = -10.0, double hi = 10.0);

using Params = std::map<std::string, double>;

struct UtilityFamily {
  std::string name;
  std::vector<std::string> parameters;
  std::function<UtilitySpec(const Params&)> make;
};

// hinge-linear(a, b), hinge-exponential(a, b, c), square-plus,
// max-coordinate, thresholded(u, r0).
const std::vector<UtilityFamily>& builtin_utilities();

// Looks a family up by name and builds it; missing parameters and unknown
// names throw InvalidParameter.
UtilitySpec make_utility(const std::string& family, const Params& params);

}  // namespace isomech
