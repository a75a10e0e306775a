#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "calmetrics/calibration.hpp"
#include "calmetrics/core_metrics.hpp"
#include "calmetrics/evaluate.hpp"
#include "calmetrics/format.hpp"
#include "calmetrics/random.hpp"

namespace calmetrics {

// y ~ Bernoulli(pi), x | y ~ Normal(mu_y, 1).
struct SyntheticSpec {
  double mu1 = 2.0;
  double mu0 = 1.8;
  double pi = 0.5;
  std::size_t n = 100000;
  std::uint64_t seed = 42;

  void validate() const {
    if (n < 2) throw InvalidConfigError("synthetic n must be >= 2");
    if (!(pi > 0.0 && pi < 1.0)) {
      throw InvalidConfigError("synthetic pi must lie in (0,1)");
    }
    if (!std::isfinite(mu1) || !std::isfinite(mu0)) {
      throw InvalidConfigError("synthetic means must be finite");
    }
  }
};

struct SyntheticData {
  std::vector<std::uint8_t> labels;
  std::vector<double> x;

  std::size_t n_pos() const {
    std::size_t k = 0;
    for (auto y : labels) k += y;
    return k;
  }
};

inline SyntheticData generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SyntheticData out;
  out.labels.reserve(spec.n);
  out.x.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool y = rng.bernoulli(spec.pi);
    out.labels.push_back(y ? 1 : 0);
    out.x.push_back(rng.normal(y ? spec.mu1 : spec.mu0, 1.0));
  }
  return out;
}

// Log likelihood ratio log N(x; mu1, 1) - log N(x; mu0, 1).
inline double optimal_score(double x, const SyntheticSpec& spec) {
  return x * (spec.mu1 - spec.mu0) +
         (spec.mu0 * spec.mu0 - spec.mu1 * spec.mu1) / 2.0;
}

inline LabeledScores score_optimal(const SyntheticData& data,
                                   const SyntheticSpec& spec) {
  std::vector<double> scores;
  scores.reserve(data.x.size());
  for (const double x : data.x) scores.push_back(optimal_score(x, spec));
  return LabeledScores(data.labels, std::move(scores));
}

inline double kl_divergence(const SyntheticSpec& spec) {
  const double d = spec.mu1 - spec.mu0;
  return 0.5 * d * d;
}

struct ExperimentRow {
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double ci_half_width = 0.0;
};

struct ExperimentTable {
  std::string kind;  // "prior_sweep" or "difficulty_sweep"
  std::size_t runs = 0;
  std::string pi0;   // Pi0Rule label
  std::size_t n = 0;
  double mu1 = 0.0;  // unused by difficulty sweeps
  double mu0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<ExperimentRow> rows;

  const ExperimentRow& at(double sweep_value, std::string_view metric) const {
    for (const auto& r : rows) {
      if (r.sweep_value == sweep_value && r.metric == metric) return r;
    }
    throw InvalidConfigError("no row for metric '" + std::string(metric) +
                             "' at " + format_double(sweep_value));
  }

  std::vector<double> means(std::string_view metric) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.metric == metric) out.push_back(r.mean);
    }
    return out;
  }

  std::vector<double> ci(std::string_view metric) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (r.metric == metric) out.push_back(r.ci_half_width);
    }
    return out;
  }
};

inline const std::vector<MetricId>& sweep_metrics() {
  static const std::vector<MetricId> ids = {
      MetricId::kAucPr,  MetricId::kAucPrGain,  MetricId::kBestF1,
      MetricId::kAucPrC, MetricId::kAucPrGainC, MetricId::kBestF1C,
  };
  return ids;
}

namespace detail {

// Draws a dataset for one (grid, run) cell. A draw missing a class is
// redrawn once with a derived seed, then rejected.
inline LabeledScores draw_cell(SyntheticSpec spec) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto data = generate(spec);
    const std::size_t pos = data.n_pos();
    if (pos > 0 && pos < data.labels.size()) return score_optimal(data, spec);
    spec.seed = derive_seed(spec.seed, {0xdead});
  }
  throw DegenerateDataError("synthetic draw missing a class twice (pi=" +
                            format_double(spec.pi) +
                            ", n=" + std::to_string(spec.n) + ")");
}

inline void accumulate_cell(const LabeledScores& data, const Pi0Rule& rule,
                            std::vector<RunningStats>& stats) {
  const Sweep s = sweep(data);
  const PriorConfig cfg(rule.resolve(s.pi()), s.pi());
  const ConfusionCounts unused{};
  const auto& ids = sweep_metrics();
  for (std::size_t m = 0; m < ids.size(); ++m) {
    stats[m].push(metric_value(ids[m], s, unused, cfg).value.value());
  }
}

inline void emit_rows(double sweep_value, std::size_t runs,
                      const std::vector<RunningStats>& stats,
                      ExperimentTable& table) {
  const auto& ids = sweep_metrics();
  for (std::size_t m = 0; m < ids.size(); ++m) {
    table.rows.push_back(
        {sweep_value, std::string(metric_name(ids[m])), stats[m].mean(),
         1.96 * stats[m].stddev() / std::sqrt(static_cast<double>(runs))});
  }
}

}  // namespace detail

struct PriorSweepConfig {
  std::vector<double> pi_grid = {0.5, 0.2, 0.05, 0.01, 0.001};
  std::size_t runs = 10;
  Pi0Rule pi0 = Pi0Rule::absolute(0.5);
  std::size_t n = 100000;
  std::uint64_t seed = 42;
  double mu1 = 2.0;
  double mu0 = 1.8;
};

// Optimal-scorer metrics as the Bernoulli prior varies. Cell (g, r) uses
// derive_seed(seed, {g, r}).
inline ExperimentTable prior_sweep(const PriorSweepConfig& cfg) {
  if (cfg.runs == 0) throw InvalidConfigError("runs must be >= 1");
  ExperimentTable table{"prior_sweep", cfg.runs, cfg.pi0.label(), cfg.n,
                        cfg.mu1,       cfg.mu0,  cfg.seed,        {}};
  for (std::size_t g = 0; g < cfg.pi_grid.size(); ++g) {
    std::vector<RunningStats> stats(sweep_metrics().size());
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      const SyntheticSpec spec{cfg.mu1, cfg.mu0, cfg.pi_grid[g], cfg.n,
                               derive_seed(cfg.seed, {g, r})};
      detail::accumulate_cell(detail::draw_cell(spec), cfg.pi0, stats);
    }
    detail::emit_rows(cfg.pi_grid[g], cfg.runs, stats, table);
  }
  return table;
}

struct DifficultySweepConfig {
  std::vector<double> kl_grid = {0.08, 0.04, 0.02, 0.01, 0.005, 0.0};
  std::size_t runs = 10;
  Pi0Rule pi0 = Pi0Rule::absolute(0.5);
  std::size_t n = 100000;
  std::uint64_t seed = 42;
  double mu0 = 1.8;
  double pi_min = 0.001;
  double pi_max = 0.5;
};

// Optimal-scorer metrics as the class gap shrinks: mu1 = mu0 + sqrt(2 KL),
// with the prior of each (grid, run) cell drawn uniformly from
// [pi_min, pi_max].
inline ExperimentTable difficulty_sweep(const DifficultySweepConfig& cfg) {
  if (cfg.runs == 0) throw InvalidConfigError("runs must be >= 1");
  ExperimentTable table{"difficulty_sweep", cfg.runs, cfg.pi0.label(), cfg.n,
                        0.0, cfg.mu0, cfg.seed, {}};
  for (std::size_t g = 0; g < cfg.kl_grid.size(); ++g) {
    const double kl = cfg.kl_grid[g];
    if (!(kl >= 0.0)) throw InvalidConfigError("KL values must be >= 0");
    std::vector<RunningStats> stats(sweep_metrics().size());
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      const std::uint64_t cell_seed = derive_seed(cfg.seed, {g, r});
      Rng prior_rng(derive_seed(cell_seed, {1}));
      const SyntheticSpec spec{cfg.mu0 + std::sqrt(2.0 * kl), cfg.mu0,
                               prior_rng.uniform(cfg.pi_min, cfg.pi_max),
                               cfg.n, derive_seed(cell_seed, {2})};
      detail::accumulate_cell(detail::draw_cell(spec), cfg.pi0, stats);
    }
    detail::emit_rows(kl, cfg.runs, stats, table);
  }
  return table;
}

inline void write_table_csv(std::ostream& os, const ExperimentTable& t) {
  os << "sweep_value,metric,mean,ci\n";
  for (const auto& r : t.rows) {
    os << format_double(r.sweep_value) << ',' << r.metric << ','
       << format_double(r.mean) << ',' << format_double(r.ci_half_width)
       << '\n';
  }
}

inline void write_table_json(std::ostream& os, const ExperimentTable& t) {
  os << "{\"kind\":" << json_string(t.kind) << ",\"runs\":" << t.runs
     << ",\"pi0\":" << json_string(t.pi0) << ",\"n\":" << t.n
     << ",\"mu1\":" << json_number(t.mu1) << ",\"mu0\":" << json_number(t.mu0)
     << ",\"seed\":" << t.seed << ",\"rows\":[";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (i) os << ',';
    os << "{\"sweep_value\":" << json_number(r.sweep_value)
       << ",\"metric\":" << json_string(r.metric)
       << ",\"mean\":" << json_number(r.mean)
       << ",\"ci\":" << json_number(r.ci_half_width) << '}';
  }
  os << "]}\n";
}

}  // namespace calmetrics
