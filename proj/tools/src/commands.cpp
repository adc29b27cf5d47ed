#include "commands.hpp"

#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "isomech/error.hpp"
#include "isomech/simulation.hpp"
#include "score_io.hpp"
#include "tool_error.hpp"

namespace isomech::tool {
namespace {

using json = nlohmann::ordered_json;

ExitCode exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::CombinatorialBlowup:
    case ErrorKind::TooManyStrategies:
      return kBlowup;
    default:
      return kParseError;
  }
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return kOk;
  } catch (const ToolError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

void emit(const std::optional<std::filesystem::path>& path, const std::string& content,
          std::ostream& out) {
  if (path) {
    write_atomic(*path, content);
  } else {
    out << content;
  }
}

MechanismConfig mechanism_from_flags(const AdjustOptions& opts) {
  auto no_extra = [&](bool theta_ok, bool lambda_ok) {
    if (opts.theta && !theta_ok) throw ToolError(kParseError, "--theta needs --variant soft");
    if (opts.lambda && !lambda_ok) {
      throw ToolError(kParseError, "--lambda needs --variant penalized");
    }
  };
  if (opts.variant == "hard" || opts.variant == "block") {
    no_extra(false, false);
    return opts.variant == "hard" ? MechanismConfig::hard() : MechanismConfig::block();
  }
  if (opts.variant == "soft") {
    no_extra(true, false);
    if (!opts.theta) throw ToolError(kParseError, "--variant soft needs --theta");
    return MechanismConfig::convex_combination(*opts.theta);
  }
  if (opts.variant == "penalized") {
    no_extra(false, true);
    if (!opts.lambda) throw ToolError(kParseError, "--variant penalized needs --lambda");
    return MechanismConfig::penalized(*opts.lambda);
  }
  throw ToolError(kParseError, "unknown variant '" + opts.variant + "'");
}

std::string strategies_csv(const TrialPlan& plan, const TrialReport& report) {
  std::ostringstream csv;
  csv << "strategy,mean_utility,std_err,mean_sq_error,paired_gap,gap_std_err\n";
  for (std::size_t s = 0; s < report.strategies.size(); ++s) {
    const StrategySummary& row = report.strategies[s];
    csv << describe(plan.strategies[s]) << ',' << format_double(row.mean_utility) << ','
        << format_double(row.std_err) << ',' << format_double(row.mean_sq_error) << ','
        << format_double(row.paired_gap) << ',' << format_double(row.gap_std_err) << '\n';
  }
  return csv.str();
}

std::string verdict_json(const TrialPlan& plan, const TrialReport& report) {
  json v;
  v["truthful_is_argmax"] = report.truthful_is_argmax;
  v["reference"] = describe(plan.strategies[report.reference]);
  v["reference_is_truthful"] = report.reference_is_truthful;
  v["argmax"] = describe(plan.strategies[report.argmax]);
  v["strategies"] = report.strategies.size();
  v["trials"] = report.trials;
  v["seed"] = plan.master_seed;
  v["variant"] = to_string(plan.mechanism.variant());
  v["utility"] = describe(plan.utility);
  v["noise"] = describe(plan.noise);
  v["raw_sq_error"] = report.raw_sq_error;
  json weakest = nullptr;
  for (std::size_t s = 0; s < report.strategies.size(); ++s) {
    const StrategySummary& row = report.strategies[s];
    if (s == report.reference || row.tie_equivalent_to_reference) continue;
    const double z = row.gap_std_err > 0 ? row.paired_gap / row.gap_std_err : 0.0;
    if (weakest.is_null() || z < weakest["z"].get<double>()) {
      weakest = {{"strategy", describe(plan.strategies[s])},
                 {"paired_gap", row.paired_gap},
                 {"gap_std_err", row.gap_std_err},
                 {"z", z}};
    }
  }
  v["smallest_gap"] = weakest;
  return v.dump(2) + "\n";
}

}  // namespace

int cmd_adjust(const AdjustOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MechanismConfig config = mechanism_from_flags(opts);
    const ScoreTable table = read_scores(opts.scores);
    const std::string ranking_text = read_file(opts.ranking);
    const OwnerReport report = config.variant() == Variant::Block
                                   ? OwnerReport(parse_blocks(ranking_text, table))
                                   : OwnerReport(parse_ranking(ranking_text, table));
    const MechanismOutcome outcome = run_mechanism(ScoreVector(table.raw), report, config);

    json doc;
    doc["items"] = json::array();
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
      json item{{"id", table.ids[i]}, {"raw", table.raw[i]}, {"adjusted", outcome.adjusted[i]}};
      if (table.reviewer_count) item["reviewer_count"] = (*table.reviewer_count)[i];
      doc["items"].push_back(std::move(item));
    }
    doc["variant"] = to_string(config.variant());
    if (config.variant() == Variant::ConvexCombination) doc["theta"] = config.theta();
    if (config.variant() == Variant::Penalized) {
      doc["lambda"] = config.lambda();
      doc["penalty"] = outcome.penalty;
    }
    doc["objective"] = outcome.objective;
    doc["residual"] = outcome.residual;
    emit(opts.out, doc.dump(2) + "\n", out);
  });
}

int cmd_truthfulness(const TruthfulnessOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig config = read_config(opts.config);
    if (opts.trials) config.plan.trials = *opts.trials;
    if (opts.seed) config.plan.master_seed = *opts.seed;
    const unsigned threads = opts.threads.value_or(config.threads);
    const TrialReport report = run_strategy_comparison(config.plan, threads);

    std::filesystem::create_directories(opts.out);
    write_atomic(opts.out / "strategies.csv", strategies_csv(config.plan, report));
    write_atomic(opts.out / "verdict.json", verdict_json(config.plan, report));
    out << "truthful_is_argmax: " << (report.truthful_is_argmax ? "true" : "false") << " ("
        << report.strategies.size() << " strategies, " << report.trials << " trials)\n";
  });
}

int cmd_risk_curve(const RiskCurveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows =
        run_risk_scaling(opts.n_grid, opts.sigma, opts.v, opts.trials, opts.seed, opts.threads);
    std::ostringstream csv;
    csv << "n,mechanism_risk,raw_risk,ratio,ratio_std_err\n";
    for (const RiskRow& row : rows) {
      csv << row.n << ',' << format_double(row.mechanism_risk) << ','
          << format_double(row.raw_risk) << ',' << format_double(row.ratio) << ','
          << format_double(row.ratio_std_err) << '\n';
    }
    emit(opts.out, csv.str(), out);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Owner-assisted score adjustment by isotonic projection"};
  app.require_subcommand(1);

  AdjustOptions adjust;
  auto* a = app.add_subcommand("adjust", "Adjust raw scores under the owner's ranking");
  a->add_option("--scores", adjust.scores, "Score file (item_id, raw_score[, reviewer_count])")
      ->required();
  a->add_option("--ranking", adjust.ranking, "Ranking file, or block file for --variant block")
      ->required();
  a->add_option("--variant", adjust.variant)
      ->check(CLI::IsMember({"hard", "block", "soft", "penalized"}));
  a->add_option("--theta", adjust.theta, "Convex-combination weight, 0 < theta < 1");
  a->add_option("--lambda", adjust.lambda, "Penalty weight, lambda > 0");
  a->add_option("--out", adjust.out, "Output JSON path (default stdout)");

  TruthfulnessOptions truth;
  auto* t = app.add_subcommand("truthfulness", "Compare owner strategies by Monte-Carlo");
  t->add_option("--config", truth.config, "Experiment JSON")->required();
  t->add_option("--trials", truth.trials, "Override the config's trial count");
  t->add_option("--seed", truth.seed, "Override the config's seed");
  t->add_option("--out", truth.out, "Output directory");
  t->add_option("--threads", truth.threads, "Worker threads (0 = all cores)");

  RiskCurveOptions risk;
  std::string grid = "64,256,1024";
  auto* r = app.add_subcommand("risk-curve", "Risk of the truthful mechanism against n");
  r->add_option("--n-grid", grid, "Comma-separated increasing item counts");
  r->add_option("--sigma", risk.sigma, "Noise standard deviation");
  r->add_option("--v", risk.v, "Total variation of the true scores");
  r->add_option("--trials", risk.trials, "Trials per n");
  r->add_option("--seed", risk.seed);
  r->add_option("--out", risk.out, "Output CSV path (default stdout)");
  r->add_option("--threads", risk.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  if (a->parsed()) return cmd_adjust(adjust, out, err);
  if (t->parsed()) return cmd_truthfulness(truth, out, err);

  risk.n_grid.clear();
  std::stringstream ss(grid);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(item, &used);
      if (used != item.size() || n < 0) throw std::invalid_argument(item);
      risk.n_grid.push_back(static_cast<std::size_t>(n));
    } catch (const std::exception&) {
      err << "error: --n-grid entry '" << item << "' is not a nonnegative integer\n";
      return kParseError;
    }
  }
  return cmd_risk_curve(risk, out, err);
}

}  // namespace isomech::tool
