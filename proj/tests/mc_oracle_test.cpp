#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "calmetrics/mc_oracle.hpp"
#include "calmetrics/synthetic.hpp"
#include "oracles.hpp"

namespace calmetrics {
namespace {

LabeledScores make_counts(std::size_t n_pos, std::size_t n_neg) {
  std::vector<std::uint8_t> y;
  std::vector<double> s;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    y.push_back(i < n_pos ? 1 : 0);
    s.push_back(static_cast<double>((i * 7919) % 101));
  }
  return LabeledScores(std::move(y), std::move(s));
}

TEST(PlanUndersample, Examples) {
  const auto a = plan_undersample(10, 990, 0.5);
  EXPECT_EQ(a.keep_pos, 10u);
  EXPECT_EQ(a.keep_neg, 10u);

  const auto b = plan_undersample(5, 5, 0.9);
  EXPECT_EQ(b.keep_pos, 5u);
  EXPECT_EQ(b.keep_neg, 1u);
  EXPECT_DOUBLE_EQ(b.achieved_pi(), 5.0 / 6.0);

  const auto c = plan_undersample(50, 50, 0.2);
  EXPECT_EQ(c.keep_pos, 13u);  // 50 * 0.25 = 12.5 rounds up
  EXPECT_EQ(c.keep_neg, 50u);

  EXPECT_THROW(plan_undersample(10, 10, 0.01), InvalidConfigError);
  EXPECT_THROW(plan_undersample(0, 10, 0.5), DegenerateDataError);
}

TEST(UndersampleToPrior, IdentityWhenPriorsMatch) {
  const auto d = make_counts(3, 7);
  const auto u = undersample_to_prior(d, 0.3, 1);
  ASSERT_EQ(u.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(u.labels()[i], d.labels()[i]);
    EXPECT_EQ(u.scores()[i], d.scores()[i]);
  }
}

TEST(UndersampleToPrior, KeepsWholeMinorityAndIsDeterministic) {
  const auto d = make_counts(10, 990);
  const auto a = undersample_to_prior(d, 0.5, 99);
  const auto b = undersample_to_prior(d, 0.5, 99);
  const auto c = undersample_to_prior(d, 0.5, 100);
  EXPECT_EQ(a.n_pos(), 10u);
  EXPECT_EQ(a.n_neg(), 10u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.scores()[i], b.scores()[i]);
  }
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    differs = differs || a.scores()[i] != c.scores()[i];
  }
  EXPECT_TRUE(differs);
}

TEST(UndersampleToPrior, RemovesPositivesWhenTargetIsLower) {
  const auto d = make_counts(50, 50);
  const auto u = undersample_to_prior(d, 0.2, 5);
  EXPECT_EQ(u.n_pos(), 13u);
  EXPECT_EQ(u.n_neg(), 50u);
}

TEST(UndersampleToPrior, SamplingIsUniform) {
  // Each negative should be kept with probability 10/100.
  const auto d = make_counts(10, 100);
  std::vector<int> hits(101, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto u = undersample_to_prior(d, 0.5, derive_seed(7, {std::uint64_t(t)}));
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!u.labels()[i]) ++hits[static_cast<int>(u.scores()[i])];
    }
  }
  // Scores (i * 7919) % 101 are distinct for the 100 negatives.
  int total = 0;
  for (int h : hits) total += h;
  EXPECT_EQ(total, trials * 10);
  for (std::size_t i = 10; i < 110; ++i) {
    const int h = hits[(i * 7919) % 101];
    EXPECT_NEAR(h, trials * 0.1, 5 * std::sqrt(trials * 0.1 * 0.9));
  }
}

TEST(OracleEstimate, ZeroSpreadAtOwnPrior) {
  const auto d = make_counts(30, 70);
  const auto r = oracle_estimate(d, 0.3, MetricId::kAucPr, 25, 3);
  EXPECT_EQ(r.std, 0.0);
  EXPECT_EQ(r.runs, 25u);
  EXPECT_DOUBLE_EQ(r.achieved_pi, 0.3);
  EXPECT_DOUBLE_EQ(r.mean, pr_curve(d).auc);
}

TEST(OracleEstimate, Deterministic) {
  const auto d = make_counts(40, 400);
  const auto a = oracle_estimate(d, 0.4, MetricId::kAucPr, 1, 11);
  const auto b = oracle_estimate(d, 0.4, MetricId::kAucPr, 1, 11);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
}

TEST(OracleEstimate, RejectsCalibratedMetricAndZeroRuns) {
  const auto d = make_counts(40, 400);
  EXPECT_THROW(oracle_estimate(d, 0.4, MetricId::kAucPrC, 5, 1),
               InvalidConfigError);
  EXPECT_THROW(oracle_estimate(d, 0.4, MetricId::kAucPr, 0, 1),
               InvalidConfigError);
}

TEST(OracleEstimate, AgreesWithClosedFormOnSyntheticData) {
  const SyntheticSpec spec{2.0, 0.5, 0.05, 20000, 123};
  const auto d = score_optimal(generate(spec), spec);
  const double pi = empirical_prior(d);
  for (const double pi0 : {0.1, 0.25, 0.5}) {
    const auto r = oracle_estimate(d, pi0, MetricId::kAucPr, 200, 77);
    const double closed = pr_curve(d, PriorConfig(pi0, pi)).auc;
    EXPECT_LE(std::abs(r.mean - closed), 2.0 * r.std / std::sqrt(200.0) + 0.01)
        << "pi0=" << pi0 << " mean=" << r.mean << " closed=" << closed;
  }
}

TEST(OracleEstimate, SpreadShrinksWithLargerSubsample) {
  const SyntheticSpec spec{2.0, 0.5, 0.05, 20000, 321};
  const auto d = score_optimal(generate(spec), spec);
  // Lower pi0 keeps more negatives, so each undersample is larger.
  const auto small = oracle_estimate(d, 0.5, MetricId::kAucPr, 100, 5);
  const auto large = oracle_estimate(d, 0.1, MetricId::kAucPr, 100, 5);
  EXPECT_LT(large.std, small.std);
}

TEST(RunningStats, MergeMatchesSequential) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(5.0, 2.0);
  RunningStats all, a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = nd(gen);
    all.push(x);
    (i < 371 ? a : b).push(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(a.stddev(), all.stddev(), 1e-12);
}

TEST(Rng, BelowIsInRangeAndStable) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(17);
    EXPECT_LT(x, 17u);
    EXPECT_EQ(x, b.below(17));
  }
  // mt19937_64 is fully specified: the 10000th output of the default seed.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
}

}  // namespace
}  // namespace calmetrics
