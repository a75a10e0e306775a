// calmetrics: evaluate score files with plain and prior-calibrated metrics,
// emit curves, run the undersampling oracle and the synthetic experiments.
//
// Exit codes: 0 ok, 2 usage, 3 parse/unreadable input, 4 degenerate data,
// 5 invalid configuration.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "calmetrics/calmetrics.hpp"

namespace cm = calmetrics;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kParse = 3,
  kDegenerate = 4,
  kInvalidConfig = 5,
};

int exit_code_for(cm::ErrorKind kind) {
  switch (kind) {
    case cm::ErrorKind::kParse:
    case cm::ErrorKind::kIo:
    case cm::ErrorKind::kInvalidInput:
      return kParse;
    case cm::ErrorKind::kDegenerate:
      return kDegenerate;
    case cm::ErrorKind::kInvalidConfig:
      return kInvalidConfig;
  }
  return kInvalidConfig;
}

void check_pi0(const std::optional<double>& pi0) {
  if (pi0 && !(*pi0 > 0.0 && *pi0 < 1.0)) {
    throw cm::InvalidConfigError("--pi0 must lie in (0,1)");
  }
}

std::vector<cm::MetricId> resolve_metrics(const std::vector<std::string>& names,
                                          bool have_pi0) {
  if (names.empty()) return cm::default_metrics(have_pi0);
  std::vector<cm::MetricId> ids;
  for (const auto& n : names) ids.push_back(cm::parse_metric(n));
  return ids;
}

struct EvalOptions {
  std::string file;
  std::optional<double> pi0;
  std::vector<std::string> metrics;
  bool by_group = false;
  bool csv = false;
  double threshold = 0.5;
};

void run_eval(const EvalOptions& o) {
  check_pi0(o.pi0);
  const auto records = cm::read_records(o.file);
  const auto ids = resolve_metrics(o.metrics, o.pi0.has_value());

  std::vector<cm::MetricReport> reports;
  if (o.by_group) {
    for (const auto& [group, data] : cm::group_records(records)) {
      try {
        reports.push_back(cm::evaluate(data, o.pi0, ids, group, o.threshold));
      } catch (const cm::DegenerateDataError& e) {
        throw cm::DegenerateDataError("group '" + group + "': " + e.what());
      }
    }
  } else {
    reports.push_back(cm::evaluate(cm::to_labeled_scores(records), o.pi0, ids,
                                   std::nullopt, o.threshold));
  }

  if (o.csv) {
    cm::write_reports_csv(std::cout, reports);
  } else if (o.by_group) {
    std::cout << "[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::cout << (i ? ",\n" : "") << cm::to_json(reports[i]);
    }
    std::cout << "]\n";
  } else {
    std::cout << cm::to_json(reports.front()) << "\n";
  }
}

struct CurveOptions {
  std::string file;
  std::string kind = "roc";
  std::optional<double> pi0;
  std::optional<std::string> group;
};

void run_curve(const CurveOptions& o) {
  check_pi0(o.pi0);
  const auto records = cm::read_records(o.file);
  std::optional<cm::LabeledScores> data;
  if (o.group) {
    const auto groups = cm::group_records(records);
    const auto it = groups.find(*o.group);
    if (it == groups.end()) {
      throw cm::InvalidConfigError("no group '" + *o.group + "' in input");
    }
    data.emplace(it->second);
  } else {
    data.emplace(cm::to_labeled_scores(records));
  }
  const auto s = cm::sweep(*data);
  std::optional<cm::PriorConfig> cfg;
  if (o.pi0) cfg.emplace(*o.pi0, s.pi());

  cm::Curve curve;
  if (o.kind == "roc") {
    curve = cm::roc_curve(s);
  } else if (o.kind == "pr") {
    curve = cm::pr_curve(s, cfg);
  } else {
    curve = cm::prgain_curve(s, cfg);
  }
  cm::write_curve_csv(std::cout, curve);
}

struct OracleOptions {
  std::string file;
  double pi0 = 0.5;
  std::size_t runs = 200;
  std::uint64_t seed = kDefaultSeed;
  std::string metric = "auc_pr";
  double threshold = 0.5;
};

void run_oracle(const OracleOptions& o) {
  check_pi0(o.pi0);
  const auto data = cm::to_labeled_scores(cm::read_records(o.file));
  const auto metric = cm::parse_metric(o.metric);
  const auto result =
      cm::oracle_estimate(data, o.pi0, metric, o.runs, o.seed, o.threshold);

  // Closed-form calibrated counterpart on the full data, where one exists.
  std::optional<double> closed_form;
  if (const auto cal = cm::calibrated(metric)) {
    const auto report =
        cm::evaluate(data, o.pi0, std::vector{*cal}, std::nullopt, o.threshold);
    closed_form = report.values.front().second;
  } else {
    const auto report = cm::evaluate(data, std::nullopt, std::vector{metric},
                                     std::nullopt, o.threshold);
    closed_form = report.values.front().second;
  }
  std::cout << cm::to_json(result, closed_form) << "\n";
}

struct SynthOptions {
  cm::SyntheticSpec spec;
  bool feature = false;
};

void run_synth(const SynthOptions& o) {
  const auto data = cm::generate(o.spec);
  std::ostringstream out;
  out << "label,score\n";
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double v = o.feature ? data.x[i] : cm::optimal_score(data.x[i], o.spec);
    out << static_cast<int>(data.labels[i]) << ',' << cm::format_double(v)
        << '\n';
  }
  std::cout << out.str();
}

cm::Pi0Rule make_rule(std::optional<double> absolute,
                      std::optional<double> multiple) {
  if (absolute && multiple) {
    throw cm::InvalidConfigError("give either --pi0 or --pi0-multiple");
  }
  if (multiple) return cm::Pi0Rule::multiple_of_pi(*multiple);
  return cm::Pi0Rule::absolute(absolute.value_or(0.5));
}

void emit_table(const cm::ExperimentTable& t, bool json) {
  std::ostringstream out;
  json ? cm::write_table_json(out, t) : cm::write_table_csv(out, t);
  std::cout << out.str();
}

struct RankOptions {
  std::vector<std::string> pool_files;
  cm::PoolBankConfig bank;
  double near_multiple = 1.01;
  double absolute_pi0 = 0.5;
};

void run_rankcorr(const RankOptions& o) {
  std::vector<cm::ModelPool> pools;
  if (!o.pool_files.empty()) {
    for (const auto& f : o.pool_files) pools.push_back(cm::read_pool(f));
  } else {
    pools = cm::synth_pool_bank(o.bank);
  }
  const auto specs = cm::standard_metric_specs(
      cm::Pi0Rule::multiple_of_pi(o.near_multiple),
      cm::Pi0Rule::absolute(o.absolute_pi0));
  const auto matrix = cm::correlation_matrix(pools, specs);
  std::ostringstream out;
  cm::write_matrix_csv(out, matrix);
  std::cout << out.str();
  std::cerr << "pools used: " << matrix.pools_used
            << ", skipped: " << matrix.pools_skipped << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prior-calibrated binary classification metrics"};
  app.require_subcommand(1);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a label,score[,group] file");
  eval_cmd->add_option("file", eval.file, "Input CSV")->required();
  eval_cmd->add_option("--pi0", eval.pi0, "Reference prior for calibrated metrics");
  eval_cmd->add_option("--metrics", eval.metrics, "Metric names")->delimiter(',');
  eval_cmd->add_flag("--by-group", eval.by_group, "One report per group");
  eval_cmd->add_option("--threshold", eval.threshold,
                       "Threshold for precision/recall/f1 (score > t)");
  auto* json_flag = eval_cmd->add_flag("--json", "JSON output (default)");
  auto* csv_flag = eval_cmd->add_flag("--csv", eval.csv, "CSV output");
  json_flag->excludes(csv_flag);

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "Emit a ROC/PR/PR-Gain curve as CSV");
  curve_cmd->add_option("file", curve.file, "Input CSV")->required();
  curve_cmd->add_option("--kind", curve.kind, "roc | pr | prgain")
      ->check(CLI::IsMember({"roc", "pr", "prgain"}));
  curve_cmd->add_option("--pi0", curve.pi0, "Reference prior (pr, prgain)");
  curve_cmd->add_option("--group", curve.group, "Restrict to one group");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Undersampling estimate of a calibrated metric");
  oracle_cmd->add_option("file", oracle.file, "Input CSV")->required();
  oracle_cmd->add_option("--pi0", oracle.pi0, "Target prior")->required();
  oracle_cmd->add_option("--runs", oracle.runs, "Undersampling runs")->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "Random seed")->capture_default_str();
  oracle_cmd->add_option("--metric", oracle.metric, "Plain metric to estimate")->capture_default_str();
  oracle_cmd->add_option("--threshold", oracle.threshold, "Threshold for precision/f1");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Draw a two-Gaussian dataset (label,score CSV)");
  synth_cmd->add_option("--mu1", synth.spec.mu1)->capture_default_str();
  synth_cmd->add_option("--mu0", synth.spec.mu0)->capture_default_str();
  synth_cmd->add_option("--pi", synth.spec.pi)->capture_default_str();
  synth_cmd->add_option("--n", synth.spec.n)->capture_default_str();
  synth_cmd->add_option("--seed", synth.spec.seed)->capture_default_str();
  synth_cmd->add_flag("--feature", synth.feature, "Emit raw x instead of the optimal score");

  cm::PriorSweepConfig prior;
  std::optional<double> prior_pi0, prior_mult;
  bool prior_json = false;
  auto* prior_cmd = app.add_subcommand("prior-sweep", "Metrics of the optimal scorer as pi varies");
  prior_cmd->add_option("--grid", prior.pi_grid, "Prior values")->delimiter(',');
  prior_cmd->add_option("--runs", prior.runs)->capture_default_str();
  prior_cmd->add_option("--pi0", prior_pi0, "Absolute reference prior (default 0.5)");
  prior_cmd->add_option("--pi0-multiple", prior_mult, "Reference prior as a multiple of pi");
  prior_cmd->add_option("--n", prior.n)->capture_default_str();
  prior_cmd->add_option("--seed", prior.seed)->capture_default_str();
  prior_cmd->add_option("--mu1", prior.mu1)->capture_default_str();
  prior_cmd->add_option("--mu0", prior.mu0)->capture_default_str();
  prior_cmd->add_flag("--json", prior_json);

  cm::DifficultySweepConfig diff;
  std::optional<double> diff_pi0, diff_mult;
  bool diff_json = false;
  auto* diff_cmd = app.add_subcommand("difficulty-sweep", "Metrics of the optimal scorer as KL shrinks");
  diff_cmd->add_option("--kl-grid", diff.kl_grid, "KL values")->delimiter(',');
  diff_cmd->add_option("--runs", diff.runs)->capture_default_str();
  diff_cmd->add_option("--pi0", diff_pi0, "Absolute reference prior (default 0.5)");
  diff_cmd->add_option("--pi0-multiple", diff_mult, "Reference prior as a multiple of pi");
  diff_cmd->add_option("--n", diff.n)->capture_default_str();
  diff_cmd->add_option("--seed", diff.seed)->capture_default_str();
  diff_cmd->add_option("--mu0", diff.mu0)->capture_default_str();
  diff_cmd->add_option("--pi-min", diff.pi_min)->capture_default_str();
  diff_cmd->add_option("--pi-max", diff.pi_max)->capture_default_str();
  diff_cmd->add_flag("--json", diff_json);

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rankcorr", "Spearman matrix of metrics over model pools");
  rank_cmd->add_option("--pool", rank.pool_files, "Pool CSV (label,<model>,...); repeatable");
  rank_cmd->add_option("--pools", rank.bank.pools, "Synthetic pools")->capture_default_str();
  rank_cmd->add_option("--models", rank.bank.models)->capture_default_str();
  rank_cmd->add_option("--n", rank.bank.n)->capture_default_str();
  rank_cmd->add_option("--pi-min", rank.bank.pi_min)->capture_default_str();
  rank_cmd->add_option("--pi-max", rank.bank.pi_max)->capture_default_str();
  rank_cmd->add_option("--mu1", rank.bank.mu1)->capture_default_str();
  rank_cmd->add_option("--mu0", rank.bank.mu0)->capture_default_str();
  rank_cmd->add_option("--noise-min", rank.bank.noise_min)->capture_default_str();
  rank_cmd->add_option("--noise-max", rank.bank.noise_max)->capture_default_str();
  rank_cmd->add_option("--seed", rank.bank.seed)->capture_default_str();
  rank_cmd->add_option("--near-pi-multiple", rank.near_multiple)->capture_default_str();
  rank_cmd->add_option("--absolute-pi0", rank.absolute_pi0)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*eval_cmd) run_eval(eval);
    if (*curve_cmd) run_curve(curve);
    if (*oracle_cmd) run_oracle(oracle);
    if (*synth_cmd) run_synth(synth);
    if (*prior_cmd) {
      prior.pi0 = make_rule(prior_pi0, prior_mult);
      emit_table(cm::prior_sweep(prior), prior_json);
    }
    if (*diff_cmd) {
      diff.pi0 = make_rule(diff_pi0, diff_mult);
      emit_table(cm::difficulty_sweep(diff), diff_json);
    }
    if (*rank_cmd) run_rankcorr(rank);
  } catch (const cm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kOk;
}
