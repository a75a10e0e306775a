#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calmetrics/calibration.hpp"
#include "calmetrics/evaluate.hpp"
#include "calmetrics/random.hpp"
#include "calmetrics/synthetic.hpp"

namespace calmetrics {

// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Tie-corrected Spearman: Pearson correlation of average ranks.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("spearman: vectors differ in length");
  }
  if (a.size() < 2) throw InvalidInputError("spearman: need >= 2 values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = (static_cast<double>(a.size()) + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateDataError("spearman: constant vector");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Predictions of m models on one shared label vector.
struct ModelPool {
  std::string dataset_id;
  std::vector<std::uint8_t> labels;
  std::vector<std::string> model_names;
  std::vector<std::vector<double>> scores;  // scores[model][instance]

  std::size_t models() const { return scores.size(); }

  void validate() const {
    if (scores.size() < 2) {
      throw InvalidInputError("model pool needs at least two models");
    }
    if (model_names.size() != scores.size()) {
      throw InvalidInputError("model pool: names and score vectors differ");
    }
    for (const auto& s : scores) {
      if (s.size() != labels.size()) {
        throw InvalidInputError("model pool: score vector length mismatch");
      }
    }
  }

  double pi() const {
    std::size_t k = 0;
    for (auto y : labels) k += y;
    return static_cast<double>(k) / static_cast<double>(labels.size());
  }
};

// A metric column: plain metric, or calibrated metric with its pi0 rule.
struct MetricSpec {
  MetricId metric = MetricId::kAucRoc;
  std::optional<Pi0Rule> pi0;

  std::string label() const {
    std::string out(metric_name(metric));
    if (pi0) out += "@" + pi0->label();
    return out;
  }
};

// The ten columns of the model-ordering study: three curve/threshold plain
// metrics plus AUC-ROC, and the calibrated PR, PR-Gain and best-F1 under a
// near-pi rule and an absolute rule.
inline std::vector<MetricSpec> standard_metric_specs(Pi0Rule near_pi,
                                                     Pi0Rule absolute) {
  std::vector<MetricSpec> out = {
      {MetricId::kAucRoc, std::nullopt},
      {MetricId::kAucPr, std::nullopt},
      {MetricId::kAucPrGain, std::nullopt},
      {MetricId::kBestF1, std::nullopt},
  };
  for (const auto& rule : {near_pi, absolute}) {
    out.push_back({MetricId::kAucPrC, rule});
    out.push_back({MetricId::kAucPrGainC, rule});
    out.push_back({MetricId::kBestF1C, rule});
  }
  return out;
}

inline std::vector<double> metric_vector(const ModelPool& pool,
                                         const MetricSpec& spec) {
  pool.validate();
  if (is_calibrated(spec.metric) && !spec.pi0) {
    throw InvalidConfigError("calibrated metric column needs a pi0 rule");
  }
  std::vector<double> out;
  out.reserve(pool.models());
  for (const auto& model_scores : pool.scores) {
    const LabeledScores data(pool.labels, model_scores);
    const Sweep s = sweep(data);
    std::optional<PriorConfig> cfg;
    if (spec.pi0) cfg.emplace(spec.pi0->resolve(s.pi()), s.pi());
    out.push_back(metric_value(spec.metric, s, ConfusionCounts{}, cfg)
                      .value.value());
  }
  return out;
}

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // k x k, averaged over pools
  std::size_t pools_used = 0;
  std::size_t pools_skipped = 0;
};

// Per-pool Spearman matrices averaged over the pools. A pool on which any
// metric fails (degenerate data, unreachable pi0, constant column) is
// skipped and counted.
inline CorrelationMatrix correlation_matrix(
    const std::vector<ModelPool>& pools,
    const std::vector<MetricSpec>& metrics) {
  if (pools.empty()) throw InvalidConfigError("no model pools given");
  const std::size_t k = metrics.size();
  CorrelationMatrix out;
  for (const auto& m : metrics) out.names.push_back(m.label());
  std::vector<std::vector<double>> sum(k, std::vector<double>(k, 0.0));

  for (const auto& pool : pools) {
    std::vector<std::vector<double>> local(k, std::vector<double>(k, 1.0));
    try {
      std::vector<std::vector<double>> columns;
      columns.reserve(k);
      for (const auto& m : metrics) columns.push_back(metric_vector(pool, m));
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          local[i][j] = local[j][i] = spearman(columns[i], columns[j]);
        }
      }
    } catch (const DegenerateDataError&) {
      ++out.pools_skipped;
      continue;
    } catch (const InvalidConfigError&) {
      ++out.pools_skipped;
      continue;
    }
    ++out.pools_used;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) sum[i][j] += local[i][j];
    }
  }
  if (out.pools_used == 0) {
    throw DegenerateDataError("every model pool was skipped");
  }
  out.values = std::move(sum);
  for (auto& row : out.values) {
    for (auto& v : row) v /= static_cast<double>(out.pools_used);
  }
  for (std::size_t i = 0; i < k; ++i) out.values[i][i] = 1.0;
  return out;
}

// Models of graded quality: optimal score plus N(0, noise_grid[j]^2) noise
// for model j. Labels and features come from `spec`; model j's noise
// stream is derive_seed(seed, {j}).
inline ModelPool synth_model_pool(const SyntheticSpec& spec, std::size_t m,
                                  const std::vector<double>& noise_grid,
                                  std::uint64_t seed) {
  if (m < 2) throw InvalidConfigError("model pool needs m >= 2");
  if (noise_grid.size() != m) {
    throw InvalidConfigError("noise grid must list one level per model");
  }
  const auto data = generate(spec);
  ModelPool pool;
  pool.dataset_id = "synthetic-" + std::to_string(spec.seed);
  pool.labels = data.labels;
  for (std::size_t j = 0; j < m; ++j) {
    if (!(noise_grid[j] >= 0.0)) {
      throw InvalidConfigError("noise levels must be >= 0");
    }
    Rng rng(derive_seed(seed, {j}));
    std::vector<double> s;
    s.reserve(data.x.size());
    for (const double x : data.x) {
      const double base = optimal_score(x, spec);
      s.push_back(noise_grid[j] == 0.0 ? base
                                       : base + noise_grid[j] * rng.normal());
    }
    pool.model_names.push_back("model_" + std::to_string(j));
    pool.scores.push_back(std::move(s));
  }
  return pool;
}

// A bank of synthetic pools: pool p draws its prior uniformly from
// [pi_min, pi_max] and grades its models with noise levels evenly spaced
// over [noise_min, noise_max].
struct PoolBankConfig {
  std::size_t pools = 20;
  std::size_t models = 30;
  std::size_t n = 5000;
  double pi_min = 0.2;
  double pi_max = 0.5;
  double mu1 = 2.0;
  double mu0 = 0.0;
  double noise_min = 0.5;
  double noise_max = 2.0;
  std::uint64_t seed = 42;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count, lo);
  for (std::size_t i = 1; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(count - 1);
  }
  return out;
}

inline std::vector<ModelPool> synth_pool_bank(const PoolBankConfig& cfg) {
  if (cfg.pools == 0) throw InvalidConfigError("need at least one pool");
  const auto noise = linspace(cfg.noise_min, cfg.noise_max, cfg.models);
  std::vector<ModelPool> out;
  out.reserve(cfg.pools);
  for (std::size_t p = 0; p < cfg.pools; ++p) {
    Rng prior_rng(derive_seed(cfg.seed, {p, 0}));
    const SyntheticSpec spec{cfg.mu1, cfg.mu0,
                             prior_rng.uniform(cfg.pi_min, cfg.pi_max), cfg.n,
                             derive_seed(cfg.seed, {p, 1})};
    auto pool = synth_model_pool(spec, cfg.models, noise,
                                 derive_seed(cfg.seed, {p, 2}));
    pool.dataset_id = "synthetic-" + std::to_string(p);
    out.push_back(std::move(pool));
  }
  return out;
}

inline void write_matrix_csv(std::ostream& os, const CorrelationMatrix& m) {
  os << "metric";
  for (const auto& n : m.names) os << ',' << n;
  os << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    os << m.names[i];
    for (const double v : m.values[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace calmetrics
