#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calmetrics/errors.hpp"

namespace calmetrics {

// Paired ground-truth labels (0/1) and real-valued scores. Validated on
// construction and immutable afterwards.
class LabeledScores {
 public:
  LabeledScores(std::vector<std::uint8_t> labels, std::vector<double> scores)
      : labels_(std::move(labels)), scores_(std::move(scores)) {
    validate();
  }

  // Convenience overload; any label other than 0 or 1 is rejected rather
  // than coerced.
  LabeledScores(std::span<const int> labels, std::vector<double> scores)
      : scores_(std::move(scores)) {
    labels_.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != 0 && labels[i] != 1) {
        throw InvalidInputError("label at index " + std::to_string(i) +
                                " is " + std::to_string(labels[i]) +
                                ", expected 0 or 1");
      }
      labels_.push_back(static_cast<std::uint8_t>(labels[i]));
    }
    validate();
  }

  LabeledScores(std::initializer_list<int> labels,
                std::initializer_list<double> scores)
      : LabeledScores(std::span<const int>(labels.begin(), labels.size()),
                      std::vector<double>(scores)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t n_pos() const noexcept { return n_pos_; }
  std::size_t n_neg() const noexcept { return labels_.size() - n_pos_; }

  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::span<const double> scores() const noexcept { return scores_; }

  // Throws DegenerateDataError unless both classes are present.
  void require_both_classes() const {
    if (n_pos_ == 0 || n_pos_ == labels_.size()) {
      throw DegenerateDataError(
          "data needs both classes (n=" + std::to_string(labels_.size()) +
          ", n_pos=" + std::to_string(n_pos_) + ")");
    }
  }

 private:
  void validate() {
    if (labels_.size() != scores_.size()) {
      throw InvalidInputError("labels and scores differ in length (" +
                              std::to_string(labels_.size()) + " vs " +
                              std::to_string(scores_.size()) + ")");
    }
    if (labels_.empty()) throw InvalidInputError("empty dataset");
    n_pos_ = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] > 1) {
        throw InvalidInputError("label at index " + std::to_string(i) +
                                " is not 0 or 1");
      }
      if (!std::isfinite(scores_[i])) {
        throw InvalidInputError("score at index " + std::to_string(i) +
                                " is not finite");
      }
      n_pos_ += labels_[i];
    }
  }

  std::vector<std::uint8_t> labels_;
  std::vector<double> scores_;
  std::size_t n_pos_ = 0;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t n_pos() const noexcept { return tp + fn; }
  std::size_t n_neg() const noexcept { return fp + tn; }

  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

// Reference prior pi0 and empirical prior pi, both strictly inside (0,1).
class PriorConfig {
 public:
  PriorConfig(double pi0, double pi) : pi0_(pi0), pi_(pi) {
    check("pi0", pi0);
    check("pi", pi);
  }

  double pi0() const noexcept { return pi0_; }
  double pi() const noexcept { return pi_; }

 private:
  static void check(const char* name, double v) {
    if (!(v > 0.0 && v < 1.0)) {
      throw InvalidConfigError(std::string(name) +
                               " must lie in the open interval (0,1), got " +
                               std::to_string(v));
    }
  }

  double pi0_;
  double pi_;
};

// Positive class ratio N+/N. Throws when either class is empty.
inline double empirical_prior(const LabeledScores& data) {
  data.require_both_classes();
  return static_cast<double>(data.n_pos()) / static_cast<double>(data.size());
}

// Prediction is positive iff score > tau (strict); ties go negative.
inline ConfusionCounts confusion_at_threshold(const LabeledScores& data,
                                              double tau) {
  ConfusionCounts c;
  const auto labels = data.labels();
  const auto scores = data.scores();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] > tau;
    if (labels[i]) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

// Empty optional when nothing is predicted positive.
inline std::optional<double> precision(const ConfusionCounts& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline double recall(const ConfusionCounts& c) {
  if (c.n_pos() == 0) throw DegenerateDataError("recall needs a positive");
  return static_cast<double>(c.tp) / static_cast<double>(c.n_pos());
}

inline double fpr(const ConfusionCounts& c) {
  if (c.n_neg() == 0) throw DegenerateDataError("FPR needs a negative");
  return static_cast<double>(c.fp) / static_cast<double>(c.n_neg());
}

inline double f1(double prec, double rec) {
  const double denom = prec + rec;
  if (denom == 0.0) return 0.0;
  return 2.0 * prec * rec / denom;
}

namespace detail {

inline double gain(double value, double pi, const char* what) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw InvalidConfigError(std::string(what) + ": prior outside (0,1)");
  }
  if (value <= 0.0) {
    throw InvalidInputError(std::string(what) + " undefined at zero");
  }
  return (value - pi) / ((1.0 - pi) * value);
}

}  // namespace detail

inline double precision_gain(double prec, double pi) {
  return detail::gain(prec, pi, "precision gain");
}

inline double recall_gain(double rec, double pi) {
  return detail::gain(rec, pi, "recall gain");
}

}  // namespace calmetrics
