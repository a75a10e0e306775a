#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "calmetrics/calibration.hpp"
#include "calmetrics/core_metrics.hpp"
#include "calmetrics/format.hpp"

namespace calmetrics {

// Confusion counts at every distinct score, highest first. points[0] is the
// all-negative prediction; each following point adds one tie group.
// confusion_at_threshold(data, thresholds[k]) == points[k] for every k.
struct Sweep {
  std::vector<ConfusionCounts> points;
  std::vector<double> thresholds;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  double pi() const {
    return static_cast<double>(n_pos) / static_cast<double>(n_pos + n_neg);
  }
};

inline Sweep sweep(const LabeledScores& data) {
  data.require_both_classes();
  const auto scores = data.scores();
  const auto labels = data.labels();

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  Sweep out;
  out.n_pos = data.n_pos();
  out.n_neg = data.n_neg();
  out.points.reserve(data.size() + 1);
  out.thresholds.reserve(data.size() + 1);

  ConfusionCounts c{0, 0, out.n_neg, out.n_pos};
  out.points.push_back(c);
  out.thresholds.push_back(scores[order.front()]);

  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]]) {
        ++c.tp;
        --c.fn;
      } else {
        ++c.fp;
        --c.tn;
      }
    }
    out.points.push_back(c);
    out.thresholds.push_back(
        i < order.size()
            ? scores[order[i]]
            : std::nextafter(s, -std::numeric_limits<double>::infinity()));
  }
  return out;
}

enum class CurveKind { kRoc, kPr, kPrGain };

inline std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::kRoc: return "roc";
    case CurveKind::kPr: return "pr";
    case CurveKind::kPrGain: return "prgain";
  }
  return "?";
}

struct CurvePoint {
  double x;
  double y;
};

struct Curve {
  CurveKind kind = CurveKind::kRoc;
  std::vector<CurvePoint> points;
  double auc = 0.0;      // clamped to [0,1]
  double raw_auc = 0.0;  // before clamping; differs only for PR-Gain
  bool clamped = false;
};

namespace detail {

inline double trapezoid(const std::vector<CurvePoint>& pts) {
  double area = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    area += (pts[k].x - pts[k - 1].x) * 0.5 * (pts[k].y + pts[k - 1].y);
  }
  return area;
}

inline void finish_auc(Curve& curve, double raw) {
  curve.raw_auc = raw;
  curve.auc = std::clamp(raw, 0.0, 1.0);
  curve.clamped = curve.auc != raw;
}

inline void check_prior(const Sweep& s, const std::optional<PriorConfig>& cfg) {
  if (cfg && std::abs(cfg->pi() - s.pi()) > 1e-12) {
    throw InvalidConfigError("prior config pi " + format_double(cfg->pi()) +
                             " does not match the data's empirical prior " +
                             format_double(s.pi()));
  }
}

// FP weight used for (possibly calibrated) precision; 1 when uncalibrated.
inline double fp_weight(const std::optional<PriorConfig>& cfg) {
  return cfg ? calibration_weight(*cfg) : 1.0;
}

}  // namespace detail

// ROC curve (FPR, TPR) with trapezoidal area.
inline Curve roc_curve(const Sweep& s) {
  Curve curve;
  curve.kind = CurveKind::kRoc;
  curve.points.reserve(s.points.size());
  const double np = static_cast<double>(s.n_pos);
  const double nn = static_cast<double>(s.n_neg);
  for (const auto& c : s.points) {
    curve.points.push_back({static_cast<double>(c.fp) / nn,
                            static_cast<double>(c.tp) / np});
  }
  detail::finish_auc(curve, detail::trapezoid(curve.points));
  return curve;
}

// PR curve (Recall, Prec or Prec_c). Area is the right-step sum
// sum_k (R_k - R_{k-1}) * P_k over sweep points; no linear interpolation.
// The recall-0 point borrows the precision of the first non-empty point.
inline Curve pr_curve(const Sweep& s, const std::optional<PriorConfig>& cfg) {
  detail::check_prior(s, cfg);
  const double w = detail::fp_weight(cfg);
  const double np = static_cast<double>(s.n_pos);

  Curve curve;
  curve.kind = CurveKind::kPr;
  curve.points.reserve(s.points.size());
  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const auto& c = s.points[k];
    const double tp = static_cast<double>(c.tp);
    const double prec = tp / (tp + w * static_cast<double>(c.fp));
    const double rec = tp / np;
    if (k == 1) curve.points.push_back({0.0, prec});
    curve.points.push_back({rec, prec});
    area += (rec - prev_recall) * prec;
    prev_recall = rec;
  }
  detail::finish_auc(curve, area);
  return curve;
}

// PR-Gain curve (Rec_G, Prec_G) over the region Rec_G in [0,1]. With a prior
// config, Prec becomes Prec_c and pi becomes pi0. The Rec_G = 0 boundary
// point is interpolated linearly in (TP, FP) space between the two sweep
// points that straddle it. Area by trapezoids.
inline Curve prgain_curve(const Sweep& s,
                          const std::optional<PriorConfig>& cfg) {
  detail::check_prior(s, cfg);
  const double w = detail::fp_weight(cfg);
  const double ref = cfg ? cfg->pi0() : s.pi();
  const double np = static_cast<double>(s.n_pos);

  const auto gain = [ref](double v) { return (v - ref) / ((1.0 - ref) * v); };
  const auto point = [&](double tp, double fp) {
    return CurvePoint{gain(tp / np), gain(tp / (tp + w * fp))};
  };

  Curve curve;
  curve.kind = CurveKind::kPrGain;
  const double target_tp = ref * np;
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const auto& c = s.points[k];
    const double tp = static_cast<double>(c.tp);
    if (tp < target_tp) continue;
    if (curve.points.empty() && tp > target_tp) {
      const auto& prev = s.points[k - 1];
      const double tp_a = static_cast<double>(prev.tp);
      const double fp_a = static_cast<double>(prev.fp);
      const double alpha = (target_tp - tp_a) / (tp - tp_a);
      const double fp_star = fp_a + alpha * (static_cast<double>(c.fp) - fp_a);
      CurvePoint boundary = point(target_tp, fp_star);
      boundary.x = 0.0;
      curve.points.push_back(boundary);
    }
    curve.points.push_back(point(tp, static_cast<double>(c.fp)));
  }
  detail::finish_auc(curve, detail::trapezoid(curve.points));
  return curve;
}

inline Curve roc_curve(const LabeledScores& data) {
  return roc_curve(sweep(data));
}

inline Curve pr_curve(const LabeledScores& data,
                      const std::optional<PriorConfig>& cfg = std::nullopt) {
  return pr_curve(sweep(data), cfg);
}

inline Curve prgain_curve(const LabeledScores& data,
                          const std::optional<PriorConfig>& cfg = std::nullopt) {
  return prgain_curve(sweep(data), cfg);
}

// "# kind=<k> auc=<a> raw_auc=<r> clamped=<b>" then "x,y" and one row per
// point.
inline void write_curve_csv(std::ostream& os, const Curve& curve) {
  os << "# kind=" << to_string(curve.kind)
     << " auc=" << format_double(curve.auc)
     << " raw_auc=" << format_double(curve.raw_auc)
     << " clamped=" << (curve.clamped ? "true" : "false") << "\n";
  os << "x,y\n";
  for (const auto& p : curve.points) {
    os << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
}

}  // namespace calmetrics
