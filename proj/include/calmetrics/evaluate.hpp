#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calmetrics/calibration.hpp"
#include "calmetrics/core_metrics.hpp"
#include "calmetrics/curves.hpp"

namespace calmetrics {

enum class MetricId {
  kPrecision,
  kRecall,
  kF1,
  kBestF1,
  kAucRoc,
  kAucPr,
  kAucPrGain,
  kPrecisionC,
  kF1C,
  kBestF1C,
  kAucPrC,
  kAucPrGainC,
};

inline constexpr std::array<MetricId, 12> kAllMetrics = {
    MetricId::kPrecision, MetricId::kRecall,     MetricId::kF1,
    MetricId::kBestF1,    MetricId::kAucRoc,     MetricId::kAucPr,
    MetricId::kAucPrGain, MetricId::kPrecisionC, MetricId::kF1C,
    MetricId::kBestF1C,   MetricId::kAucPrC,     MetricId::kAucPrGainC,
};

inline std::string_view metric_name(MetricId id) {
  switch (id) {
    case MetricId::kPrecision: return "precision";
    case MetricId::kRecall: return "recall";
    case MetricId::kF1: return "f1";
    case MetricId::kBestF1: return "best_f1";
    case MetricId::kAucRoc: return "auc_roc";
    case MetricId::kAucPr: return "auc_pr";
    case MetricId::kAucPrGain: return "auc_pr_gain";
    case MetricId::kPrecisionC: return "precision_c";
    case MetricId::kF1C: return "f1_c";
    case MetricId::kBestF1C: return "best_f1_c";
    case MetricId::kAucPrC: return "auc_pr_c";
    case MetricId::kAucPrGainC: return "auc_pr_gain_c";
  }
  return "?";
}

inline MetricId parse_metric(std::string_view name) {
  for (const auto id : kAllMetrics) {
    if (metric_name(id) == name) return id;
  }
  throw InvalidConfigError("unknown metric '" + std::string(name) + "'");
}

inline bool is_calibrated(MetricId id) {
  switch (id) {
    case MetricId::kPrecisionC:
    case MetricId::kF1C:
    case MetricId::kBestF1C:
    case MetricId::kAucPrC:
    case MetricId::kAucPrGainC:
      return true;
    default:
      return false;
  }
}

// Calibrated metric -> its plain counterpart; plain metrics map to
// themselves.
inline MetricId uncalibrated(MetricId id) {
  switch (id) {
    case MetricId::kPrecisionC: return MetricId::kPrecision;
    case MetricId::kF1C: return MetricId::kF1;
    case MetricId::kBestF1C: return MetricId::kBestF1;
    case MetricId::kAucPrC: return MetricId::kAucPr;
    case MetricId::kAucPrGainC: return MetricId::kAucPrGain;
    default: return id;
  }
}

// Plain metric -> calibrated counterpart, if one exists.
inline std::optional<MetricId> calibrated(MetricId id) {
  switch (id) {
    case MetricId::kPrecision: return MetricId::kPrecisionC;
    case MetricId::kF1: return MetricId::kF1C;
    case MetricId::kBestF1: return MetricId::kBestF1C;
    case MetricId::kAucPr: return MetricId::kAucPrC;
    case MetricId::kAucPrGain: return MetricId::kAucPrGainC;
    default:
      if (is_calibrated(id)) return id;
      return std::nullopt;
  }
}

struct BestF1 {
  double value = 0.0;
  double threshold = 0.0;  // predict positive iff score > threshold
};

// Maximum F1 (or calibrated F1) over the sweep thresholds; the first
// (highest-threshold) maximiser wins ties.
inline BestF1 best_f1(const Sweep& s, const std::optional<PriorConfig>& cfg) {
  BestF1 best{-1.0, s.thresholds.front()};
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const auto& c = s.points[k];
    const double prec = cfg ? calibrated_precision(c, *cfg).value()
                            : precision(c).value();
    const double value = f1(prec, recall(c));
    if (value > best.value) best = {value, s.thresholds[k]};
  }
  return best;
}

struct MetricValue {
  std::optional<double> value;  // empty when undefined (empty prediction set)
  bool clamped = false;
  std::optional<double> threshold;  // argmax threshold for best-F1 metrics
};

namespace detail {
inline MetricValue plain_value(std::optional<double> v, bool clamped = false) {
  return {v, clamped, std::nullopt};
}
}  // namespace detail

// One metric from a prepared sweep. `at_threshold` holds the confusion
// counts at the reporting threshold used by precision/recall/F1.
inline MetricValue metric_value(MetricId id, const Sweep& s,
                                const ConfusionCounts& at_threshold,
                                const std::optional<PriorConfig>& cfg) {
  if (is_calibrated(id) && !cfg) {
    throw InvalidConfigError("metric '" + std::string(metric_name(id)) +
                             "' needs a reference prior pi0");
  }
  const std::optional<PriorConfig> none;
  switch (id) {
    case MetricId::kPrecision:
      return detail::plain_value(precision(at_threshold));
    case MetricId::kRecall:
      return detail::plain_value(recall(at_threshold));
    case MetricId::kF1:
      return detail::plain_value(
          f1(precision(at_threshold).value_or(0.0), recall(at_threshold)));
    case MetricId::kPrecisionC:
      return detail::plain_value(calibrated_precision(at_threshold, *cfg));
    case MetricId::kF1C:
      return detail::plain_value(calibrated_f1(at_threshold, *cfg));
    case MetricId::kBestF1:
    case MetricId::kBestF1C: {
      const auto b = best_f1(s, id == MetricId::kBestF1C ? cfg : none);
      return {b.value, false, b.threshold};
    }
    case MetricId::kAucRoc:
      return detail::plain_value(roc_curve(s).auc);
    case MetricId::kAucPr:
    case MetricId::kAucPrC:
      return detail::plain_value(
          pr_curve(s, id == MetricId::kAucPrC ? cfg : none).auc);
    case MetricId::kAucPrGain:
    case MetricId::kAucPrGainC: {
      const auto curve =
          prgain_curve(s, id == MetricId::kAucPrGainC ? cfg : none);
      return detail::plain_value(curve.auc, curve.clamped);
    }
  }
  throw InvalidConfigError("unhandled metric");
}

struct MetricReport {
  std::optional<std::string> group;
  std::size_t n = 0;
  std::size_t n_pos = 0;
  double pi = 0.0;
  std::optional<double> pi0;
  double threshold = 0.5;  // reporting threshold for precision/recall/f1
  // Every requested metric in request order; nullopt marks "undefined".
  std::vector<std::pair<std::string, std::optional<double>>> values;
  std::map<std::string, double> argmax_thresholds;
  std::vector<std::string> clamped;

  std::optional<double> get(std::string_view name) const {
    for (const auto& [k, v] : values) {
      if (k == name) return v;
    }
    throw InvalidConfigError("metric '" + std::string(name) +
                             "' not in report");
  }
};

inline std::vector<MetricId> default_metrics(bool with_calibrated) {
  std::vector<MetricId> out;
  for (const auto id : kAllMetrics) {
    if (with_calibrated || !is_calibrated(id)) out.push_back(id);
  }
  return out;
}

inline MetricReport evaluate(const LabeledScores& data,
                             std::optional<double> pi0,
                             const std::vector<MetricId>& metrics,
                             std::optional<std::string> group = std::nullopt,
                             double threshold = 0.5) {
  const Sweep s = sweep(data);
  const double pi = s.pi();
  std::optional<PriorConfig> cfg;
  if (pi0) cfg.emplace(*pi0, pi);

  MetricReport report;
  report.group = std::move(group);
  report.n = data.size();
  report.n_pos = data.n_pos();
  report.pi = pi;
  report.threshold = threshold;

  const ConfusionCounts at = confusion_at_threshold(data, threshold);
  bool any_calibrated = false;
  for (const auto id : metrics) {
    const auto v = metric_value(id, s, at, cfg);
    const std::string name(metric_name(id));
    any_calibrated = any_calibrated || is_calibrated(id);
    report.values.emplace_back(name, v.value);
    if (v.threshold) report.argmax_thresholds[name] = *v.threshold;
    if (v.clamped) report.clamped.push_back(name);
  }
  if (any_calibrated) report.pi0 = pi0;
  return report;
}

inline MetricReport evaluate(const LabeledScores& data,
                             std::optional<double> pi0,
                             const std::vector<std::string>& metric_names,
                             std::optional<std::string> group = std::nullopt,
                             double threshold = 0.5) {
  std::vector<MetricId> ids;
  ids.reserve(metric_names.size());
  for (const auto& name : metric_names) ids.push_back(parse_metric(name));
  return evaluate(data, pi0, ids, std::move(group), threshold);
}

}  // namespace calmetrics
