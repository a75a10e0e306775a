#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <string>
#include <vector>

#include "calmetrics/core_metrics.hpp"
#include "calmetrics/evaluate.hpp"
#include "calmetrics/random.hpp"

namespace calmetrics {

struct OracleResult {
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::size_t runs = 0;
  double pi0_target = 0.0;
  double achieved_pi = 0.0;
};

// Class sizes kept by undersampling toward pi0. One class is kept whole;
// the other is cut to the nearest integer (half rounds up).
struct UndersamplePlan {
  std::size_t keep_pos = 0;
  std::size_t keep_neg = 0;

  double achieved_pi() const {
    return static_cast<double>(keep_pos) /
           static_cast<double>(keep_pos + keep_neg);
  }
};

inline UndersamplePlan plan_undersample(std::size_t n_pos, std::size_t n_neg,
                                        double pi0) {
  if (!(pi0 > 0.0 && pi0 < 1.0)) {
    throw InvalidConfigError("pi0 must lie in (0,1)");
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateDataError("undersampling needs both classes");
  }
  const auto round_half_up = [](double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
  };
  const double pi =
      static_cast<double>(n_pos) / static_cast<double>(n_pos + n_neg);
  UndersamplePlan plan{n_pos, n_neg};
  if (pi0 > pi) {
    plan.keep_neg = std::min(
        n_neg, round_half_up(static_cast<double>(n_pos) * (1.0 - pi0) / pi0));
  } else if (pi0 < pi) {
    plan.keep_pos = std::min(
        n_pos, round_half_up(static_cast<double>(n_neg) * pi0 / (1.0 - pi0)));
  }
  if (plan.keep_pos == 0 || plan.keep_neg == 0) {
    throw InvalidConfigError("pi0 " + format_double(pi0) +
                             " is unreachable: it would leave a class empty");
  }
  return plan;
}

namespace detail {

// k indices drawn uniformly without replacement from `pool`, returned in
// their original order. Partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(
    std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

inline LabeledScores undersample_to_prior(const LabeledScores& data,
                                          double pi0, std::uint64_t seed) {
  const auto plan = plan_undersample(data.n_pos(), data.n_neg(), pi0);
  if (plan.keep_pos == data.n_pos() && plan.keep_neg == data.n_neg()) {
    return data;
  }
  std::vector<std::size_t> pos, neg;
  pos.reserve(data.n_pos());
  neg.reserve(data.n_neg());
  const auto labels = data.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  if (plan.keep_pos < pos.size()) {
    pos = detail::sample_without_replacement(std::move(pos), plan.keep_pos, rng);
  }
  if (plan.keep_neg < neg.size()) {
    neg = detail::sample_without_replacement(std::move(neg), plan.keep_neg, rng);
  }
  std::vector<std::size_t> keep;
  keep.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(),
             std::back_inserter(keep));

  std::vector<std::uint8_t> out_labels;
  std::vector<double> out_scores;
  out_labels.reserve(keep.size());
  out_scores.reserve(keep.size());
  const auto scores = data.scores();
  for (const auto i : keep) {
    out_labels.push_back(labels[i]);
    out_scores.push_back(scores[i]);
  }
  return LabeledScores(std::move(out_labels), std::move(out_scores));
}

// Heuristic calibration: mean/std of the plain metric over `runs`
// independent undersamples to pi0. Run r uses derive_seed(seed, {r}).
inline OracleResult oracle_estimate(const LabeledScores& data, double pi0,
                                    MetricId metric, std::size_t runs,
                                    std::uint64_t seed,
                                    double threshold = 0.5) {
  if (is_calibrated(metric)) {
    throw InvalidConfigError(
        "the oracle estimates plain metrics; pass '" +
        std::string(metric_name(uncalibrated(metric))) + "'");
  }
  if (runs == 0) throw InvalidConfigError("runs must be >= 1");
  const auto plan = plan_undersample(data.n_pos(), data.n_neg(), pi0);

  RunningStats stats;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto sub = undersample_to_prior(data, pi0, derive_seed(seed, {r}));
    const auto s = sweep(sub);
    const auto at = confusion_at_threshold(sub, threshold);
    const auto v = metric_value(metric, s, at, std::nullopt);
    stats.push(v.value.value_or(std::nan("")));
  }
  return {std::string(metric_name(metric)), stats.mean(), stats.stddev(), runs,
          pi0, plan.achieved_pi()};
}

}  // namespace calmetrics
