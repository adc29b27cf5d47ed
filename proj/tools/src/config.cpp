#include "config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "isomech/error.hpp"
#include "score_io.hpp"
#include "tool_error.hpp"

namespace isomech::tool {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ToolError(kParseError, where + ": " + msg);
}

void allow_keys(const json& obj, const std::string& where, std::set<std::string> keys) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) bad(where, "unknown key '" + key + "'");
  }
}

const json& need(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) bad(where, "missing '" + key + "'");
  return obj.at(key);
}

double number(const json& obj, const std::string& where, const std::string& key) {
  const json& v = need(obj, where, key);
  if (!v.is_number()) bad(where + "." + key, "expected a number");
  return v.get<double>();
}

std::string text(const json& obj, const std::string& where, const std::string& key) {
  const json& v = need(obj, where, key);
  if (!v.is_string()) bad(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::uint64_t count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) bad(where, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> reals(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) bad(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::size_t> indices(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of indices");
  std::vector<std::size_t> out;
  for (const json& x : v) out.push_back(static_cast<std::size_t>(count(x, where)));
  return out;
}

NoiseModel parse_noise(const json& j) {
  const std::string model = text(j, "noise", "model");
  if (model == "iid-gaussian") {
    allow_keys(j, "noise", {"model", "sigma"});
    return IidGaussian{number(j, "noise", "sigma")};
  }
  if (model == "exchangeable-latent") {
    allow_keys(j, "noise", {"model", "sigma", "tau"});
    return ExchangeableLatent{number(j, "noise", "sigma"), number(j, "noise", "tau")};
  }
  if (model == "permuted-base") {
    allow_keys(j, "noise", {"model", "scales"});
    return PermutedBase{reals(need(j, "noise", "scales"), "noise.scales")};
  }
  bad("noise.model", "unknown model '" + model + "'");
}

UtilitySpec parse_utility(const json& j, const std::string& where) {
  const std::string family = text(j, where, "family");
  if (family == "score-dependent") {
    allow_keys(j, where, {"family", "g", "h"});
    return score_dependent(parse_utility(need(j, where, "g"), where + ".g"),
                           parse_utility(need(j, where, "h"), where + ".h"));
  }
  allow_keys(j, where, {"family", "params"});
  Params params;
  if (j.contains("params")) {
    allow_keys(j["params"], where + ".params", {"a", "b", "c", "u", "r0"});
    for (const auto& [key, value] : j["params"].items()) {
      if (!value.is_number()) bad(where + ".params." + key, "expected a number");
      params[key] = value.get<double>();
    }
  }
  return make_utility(family, params);
}

MechanismConfig parse_mechanism(const json& j) {
  const std::string variant = text(j, "mechanism", "variant");
  if (variant == "hard") {
    allow_keys(j, "mechanism", {"variant"});
    return MechanismConfig::hard();
  }
  if (variant == "block") {
    allow_keys(j, "mechanism", {"variant"});
    return MechanismConfig::block();
  }
  if (variant == "soft") {
    allow_keys(j, "mechanism", {"variant", "theta"});
    return MechanismConfig::convex_combination(number(j, "mechanism", "theta"));
  }
  if (variant == "penalized") {
    allow_keys(j, "mechanism", {"variant", "lambda"});
    return MechanismConfig::penalized(number(j, "mechanism", "lambda"));
  }
  bad("mechanism.variant", "unknown variant '" + variant + "'");
}

std::vector<OwnerReport> parse_strategies(const json& doc, Variant variant, std::size_t n) {
  const bool block = variant == Variant::Block;
  const json strategies = doc.contains("strategies") ? doc["strategies"] : json("all");
  if (strategies.is_string()) {
    if (strategies.get<std::string>() != "all") bad("strategies", "expected \"all\" or a list");
    if (!block) {
      if (doc.contains("block_sizes")) bad("block_sizes", "only valid with the block variant");
      return enumerate_strategies(StrategyKind::Full, n);
    }
    const auto sizes = indices(need(doc, "config", "block_sizes"), "block_sizes");
    return enumerate_strategies(StrategyKind::Block, n, sizes);
  }
  if (!strategies.is_array()) bad("strategies", "expected \"all\" or a list");
  std::vector<OwnerReport> out;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const std::string where = "strategies[" + std::to_string(s) + "]";
    if (block) {
      if (!strategies[s].is_array()) bad(where, "expected a list of blocks");
      std::vector<std::vector<std::size_t>> blocks;
      for (const json& b : strategies[s]) blocks.push_back(indices(b, where));
      out.emplace_back(BlockPartition(std::move(blocks)));
    } else {
      out.emplace_back(Ranking(indices(strategies[s], where)));
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    const auto upto = source.substr(0, std::min<std::size_t>(e.byte, source.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    throw ToolError(kParseError, "line " + std::to_string(line) + ": malformed JSON");
  }
  allow_keys(doc, "config",
             {"true_scores", "noise", "utility", "mechanism", "strategies", "block_sizes",
              "trials", "seed", "reference", "threads"});

  ScoreVector true_scores(reals(need(doc, "config", "true_scores"), "true_scores"));
  NoiseModel noise = parse_noise(need(doc, "config", "noise"));
  UtilitySpec utility = parse_utility(need(doc, "config", "utility"), "utility");
  const MechanismConfig mechanism = doc.contains("mechanism")
                                        ? parse_mechanism(doc["mechanism"])
                                        : MechanismConfig::hard();
  auto strategies = parse_strategies(doc, mechanism.variant(), true_scores.size());

  const auto trials = static_cast<std::size_t>(count(need(doc, "config", "trials"), "trials"));
  const std::uint64_t seed = doc.contains("seed") ? count(doc["seed"], "seed") : 0;
  std::optional<std::size_t> reference;
  if (doc.contains("reference")) {
    reference = static_cast<std::size_t>(count(doc["reference"], "reference"));
  }
  TrialPlan plan{std::move(true_scores), std::move(noise), std::move(utility), mechanism,
                 std::move(strategies), trials, seed, reference, false};
  ExperimentConfig config{std::move(plan)};
  if (doc.contains("threads")) config.threads = static_cast<unsigned>(count(doc["threads"], "threads"));
  return config;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

}  // namespace isomech::tool
