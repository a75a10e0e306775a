// Same scorer evaluated on two test sets that differ only in class balance.
// Plain AUC-PR moves with the positive ratio; the calibrated one does not.

#include <cstdio>

#include "calmetrics/calmetrics.hpp"

int main() {
  using namespace calmetrics;
  const double pi0 = 0.5;
  for (const double pi : {0.5, 0.05, 0.005}) {
    const SyntheticSpec spec{2.0, 0.5, pi, 200000, 7};
    const auto data = score_optimal(generate(spec), spec);
    const auto r = evaluate(data, pi0,
                            std::vector<MetricId>{MetricId::kAucRoc,
                                                  MetricId::kAucPr,
                                                  MetricId::kAucPrC});
    std::printf("pi=%.3f  auc_roc=%.4f  auc_pr=%.4f  auc_pr_c=%.4f\n", r.pi,
                *r.get("auc_roc"), *r.get("auc_pr"), *r.get("auc_pr_c"));
  }
}
