#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isomech/error.hpp"
#include "isomech/utility.hpp"

namespace isomech {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an isomech::Error";
  return ErrorKind::InvalidPlan;
}

double scalar(const UtilitySpec& spec, double r) {
  const std::vector<double> one{r};
  return eval_utility(spec, one);
}

TEST(EvalUtility, Examples) {
  EXPECT_EQ(eval_utility(hinge_linear(1, 0), ScoreVector{2, -1, 3}), 5.0);
  EXPECT_EQ(eval_utility(thresholded(1, 0), ScoreVector{2, -1, 3}), 2.0);
  const UtilitySpec sd = score_dependent(square_plus(), hinge_linear(1, 0));
  EXPECT_EQ(eval_utility(sd, ScoreVector{1, 1}, ScoreVector{2, 3}), 5.0);
}

TEST(EvalUtility, Errors) {
  const UtilitySpec sd = score_dependent(square_plus(), hinge_linear(1, 0));
  EXPECT_EQ(kind_of([&] { eval_utility(sd, ScoreVector{1, 1}); }), ErrorKind::MissingTrueScores);
  EXPECT_EQ(kind_of([] { eval_utility(hinge_exponential(1, 0, 1), ScoreVector{1e6}); }),
            ErrorKind::NonFiniteScore);
}

TEST(BuiltinUtilities, Examples) {
  EXPECT_EQ(scalar(hinge_linear(1, 0), -5), 0.0);
  EXPECT_EQ(scalar(hinge_exponential(1, 0, 1), 0), 0.0);
  EXPECT_NEAR(scalar(hinge_exponential(2, 1, 1), 0.5), std::exp(2.0) - 1, 1e-12);
  EXPECT_EQ(eval_utility(max_coordinate(), ScoreVector{1, 7, 3}), 7.0);
  EXPECT_EQ(scalar(square_plus(), -2), 0.0);
  EXPECT_EQ(scalar(square_plus(), 3), 9.0);
}

TEST(BuiltinUtilities, ParameterValidation) {
  EXPECT_EQ(kind_of([] { hinge_linear(0, 1); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { hinge_exponential(1, 0, 0); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { hinge_exponential(-1, 0, 1); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { thresholded(0, 0); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_utility("cubic", {}); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_utility("hinge-linear", {{"a", 1.0}}); }),
            ErrorKind::InvalidParameter);
  EXPECT_EQ(scalar(make_utility("hinge-linear", {{"a", 2.0}, {"b", 1.0}}), 1.0), 3.0);
}

TEST(BuiltinUtilities, CatalogListsEveryFamily) {
  std::vector<std::string> names;
  for (const auto& f : builtin_utilities()) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"hinge-linear", "hinge-exponential", "square-plus",
                                             "max-coordinate", "thresholded"}));
}

TEST(SeparableUtilities, PermutationInvariant) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0, 2);
  const std::vector<UtilitySpec> specs{hinge_linear(1.5, -0.5), hinge_exponential(0.7, 0.1, 2),
                                       square_plus(), thresholded(2, 0.3), max_coordinate()};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + trial % 9);
    for (double& v : r) v = normal(rng);
    std::vector<double> p = r;
    std::shuffle(p.begin(), p.end(), rng);
    for (const auto& spec : specs) EXPECT_NEAR(eval_utility(spec, r), eval_utility(spec, p), 1e-9);
  }
}

TEST(SeparableUtilities, ConvexAndNondecreasing) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-6, 6);
  const std::vector<UtilitySpec> specs{hinge_linear(1, 0), hinge_linear(3, 2),
                                       hinge_exponential(1, 0, 1), hinge_exponential(0.5, -1, 3),
                                       square_plus()};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 2000; ++trial) {
      double a = u(rng), b = u(rng);
      EXPECT_LE(scalar(spec, 0.5 * (a + b)), 0.5 * (scalar(spec, a) + scalar(spec, b)) + 1e-9);
      if (a > b) std::swap(a, b);
      EXPECT_LE(scalar(spec, a), scalar(spec, b));
    }
    EXPECT_NO_THROW(validate_utility(spec, -6, 6));
  }
}

TEST(ScoreDependent, MarginalUtilityIncreasesWithTrueScore) {
  const UtilitySpec spec = score_dependent(square_plus(), hinge_linear(1, 0));
  const auto& sd = std::get<ScoreDependent>(spec);
  auto dU = [&](double r, double R) {
    const double h = 1e-5 * std::max(1.0, std::abs(r));
    return (sd.g(r + h) * sd.h(R) - sd.g(r - h) * sd.h(R)) / (2 * h);
  };
  for (double r = -3; r <= 3; r += 0.25) {
    for (double R = -2; R < 4; R += 0.5) EXPECT_LE(dU(r, R), dU(r, R + 0.5) + 1e-6);
  }
  EXPECT_NO_THROW(validate_utility(spec, -5, 5));
}

TEST(ValidateUtility, RejectsNonConvexOrDecreasing) {
  EXPECT_EQ(kind_of([] { separable("concave", [](double r) { return -r * r; }); }),
            ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { separable("decreasing", [](double r) { return -r; }); }),
            ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { separable("sqrt", [](double r) { return std::sqrt(std::max(0.0, r)); }); }),
            ErrorKind::InvalidParameter);
  EXPECT_NO_THROW(separable("cube-plus", [](double r) { return std::pow(std::max(0.0, r), 3); }));
  // h must be nonnegative: a plain identity fails on negative true scores.
  const UtilitySpec bad_h = ScoreDependent{"square-plus", [](double r) { return r > 0 ? r * r : 0; },
                                           "identity", [](double R) { return R; }};
  EXPECT_EQ(kind_of([&] { validate_utility(bad_h, -1, 1); }), ErrorKind::InvalidParameter);
  EXPECT_NO_THROW(validate_utility(bad_h, 0.5, 3));
  // The step utility is deliberately exempt.
  EXPECT_NO_THROW(validate_utility(thresholded(1, 0), -5, 5));
}

}  // namespace
}  // namespace isomech
