#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "calmetrics/core_metrics.hpp"

namespace calmetrics {

// Factor applied to FP so that precision reads as if the positive ratio
// were pi0 instead of pi.
inline double calibration_weight(const PriorConfig& cfg) {
  const double pi = cfg.pi();
  const double pi0 = cfg.pi0();
  return pi * (1.0 - pi0) / (pi0 * (1.0 - pi));
}

// TP / (TP + w * FP). Empty when TP = FP = 0.
inline std::optional<double> calibrated_precision(const ConfusionCounts& c,
                                                  const PriorConfig& cfg) {
  if (c.tp + c.fp == 0) return std::nullopt;
  const double tp = static_cast<double>(c.tp);
  return tp / (tp + calibration_weight(cfg) * static_cast<double>(c.fp));
}

// Same quantity expressed through class-conditional rates only:
// 1 / (1 + (1 - pi0) / pi0 * FPR / TPR). Requires tpr > 0.
inline double calibrated_precision_from_rates(double tpr, double fpr_value,
                                              double pi0) {
  if (!(tpr > 0.0)) {
    throw InvalidInputError("rate form of calibrated precision needs TPR > 0");
  }
  return 1.0 / (1.0 + (1.0 - pi0) / pi0 * (fpr_value / tpr));
}

inline double calibrated_f1(const ConfusionCounts& c, const PriorConfig& cfg) {
  const double rec = recall(c);
  return f1(calibrated_precision(c, cfg).value_or(0.0), rec);
}

struct GainPair {
  double precision_gain;
  double recall_gain;
};

// Gains with Prec -> Prec_c and pi -> pi0. The precision component matches
// the uncalibrated precision gain up to rounding.
inline GainPair calibrated_gains(const ConfusionCounts& c,
                                 const PriorConfig& cfg) {
  const double prec_c = calibrated_precision(c, cfg).value_or(0.0);
  return {precision_gain(prec_c, cfg.pi0()),
          recall_gain(recall(c), cfg.pi0())};
}

// How to pick pi0 for a dataset: a fixed value, or a multiple of its own pi.
struct Pi0Rule {
  enum class Kind { kAbsolute, kMultipleOfPi };

  Kind kind = Kind::kAbsolute;
  double value = 0.5;

  static Pi0Rule absolute(double v) { return {Kind::kAbsolute, v}; }
  static Pi0Rule multiple_of_pi(double m) { return {Kind::kMultipleOfPi, m}; }

  double resolve(double pi) const {
    const double pi0 = kind == Kind::kAbsolute ? value : value * pi;
    if (!(pi0 > 0.0 && pi0 < 1.0)) {
      throw InvalidConfigError("resolved pi0 " + std::to_string(pi0) +
                               " outside (0,1)");
    }
    return pi0;
  }

  std::string label() const {
    char buf[64];
    if (kind == Kind::kAbsolute) {
      std::snprintf(buf, sizeof buf, "%g", value);
    } else {
      std::snprintf(buf, sizeof buf, "%gpi", value);
    }
    return buf;
  }

  friend bool operator==(const Pi0Rule&, const Pi0Rule&) = default;
};

}  // namespace calmetrics
