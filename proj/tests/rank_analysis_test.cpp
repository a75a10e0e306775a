#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "calmetrics/rank_analysis.hpp"

namespace calmetrics {
namespace {

// Textbook formula, valid only without ties.
double spearman_no_ties(const std::vector<double>& a,
                        const std::vector<double>& b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double n = static_cast<double>(a.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

TEST(AverageRanks, Ties) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}),
            (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Spearman, Examples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(spearman(a, a), 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{1, 3, 2, 4}), 0.8);
}

TEST(Spearman, Errors) {
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1},
                        std::vector<double>{1, 2, 3}),
               DegenerateDataError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1}),
               InvalidInputError);
}

TEST(Spearman, MatchesClosedFormWithoutTies) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 2 + iter % 40;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = nd(gen);
      b[i] = a[i] + nd(gen);
    }
    EXPECT_NEAR(spearman(a, b), spearman_no_ties(a, b), 1e-12);
  }
}

TEST(Spearman, TieCorrectedAgainstPearsonOfRanks) {
  // ranks a = (1.5,1.5,3,4), b = (1,2.5,2.5,4): 3.75 / 4.5.
  const std::vector<double> a{1, 1, 2, 3};
  const std::vector<double> b{1, 2, 2, 3};
  EXPECT_NEAR(spearman(a, b), 5.0 / 6.0, 1e-15);
}

TEST(Spearman, InvariantUnderIncreasingTransform) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> a(30), b(30), ta(30);
    for (int i = 0; i < 30; ++i) {
      a[i] = std::round(nd(gen) * 3);
      b[i] = a[i] + nd(gen);
      ta[i] = std::exp(a[i]) - 4.0;
    }
    EXPECT_NEAR(spearman(a, b), spearman(ta, b), 1e-12);
  }
}

ModelPool small_pool(std::uint64_t seed, double pi = 0.3) {
  const SyntheticSpec spec{2.0, 0.0, pi, 3000, seed};
  return synth_model_pool(spec, 6, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}, seed + 1);
}

TEST(SynthModelPool, NoiseZeroIsOptimalScorer) {
  const SyntheticSpec spec{2.0, 0.0, 0.3, 1000, 4};
  const auto pool = synth_model_pool(spec, 2, {0.0, 1.0}, 5);
  const auto d = generate(spec);
  ASSERT_EQ(pool.scores[0].size(), d.x.size());
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    EXPECT_EQ(pool.scores[0][i], optimal_score(d.x[i], spec));
  }
  EXPECT_EQ(pool.labels, d.labels);
}

TEST(SynthModelPool, HugeNoiseIsChance) {
  const SyntheticSpec spec{2.0, 0.0, 0.3, 20000, 6};
  const auto pool = synth_model_pool(spec, 2, {0.0, 1e6}, 7);
  const auto v = metric_vector(pool, {MetricId::kAucRoc, std::nullopt});
  EXPECT_NEAR(v[1], 0.5, 0.02);
  EXPECT_GT(v[0], 0.9);
}

TEST(SynthModelPool, QualityDecreasesWithNoise) {
  std::vector<double> mean(6, 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto v = metric_vector(small_pool(100 + seed),
                                 {MetricId::kAucPr, std::nullopt});
    for (std::size_t j = 0; j < v.size(); ++j) mean[j] += v[j] / 10.0;
  }
  for (std::size_t j = 1; j < mean.size(); ++j) EXPECT_LT(mean[j], mean[j - 1]);
}

TEST(SynthModelPool, Errors) {
  const SyntheticSpec spec{2.0, 0.0, 0.3, 100, 1};
  EXPECT_THROW(synth_model_pool(spec, 1, {0.0}, 1), InvalidConfigError);
  EXPECT_THROW(synth_model_pool(spec, 3, {0.0, 1.0}, 1), InvalidConfigError);
}

TEST(MetricVector, Dominance) {
  ModelPool pool;
  pool.labels = {1, 1, 0, 0, 0};
  pool.model_names = {"good", "bad"};
  pool.scores = {{5, 4, 3, 2, 1}, {1, 4, 3, 2, 5}};
  const auto v = metric_vector(pool, {MetricId::kAucRoc, std::nullopt});
  EXPECT_GT(v[0], v[1]);
}

TEST(MetricVector, NearPiRuleTracksPlainMetric) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pool = small_pool(200 + seed);
    const auto plain = metric_vector(pool, {MetricId::kAucPr, std::nullopt});
    const auto cal = metric_vector(
        pool, {MetricId::kAucPrC, Pi0Rule::multiple_of_pi(1.01)});
    EXPECT_GE(spearman(plain, cal), 0.99);
  }
}

TEST(MetricVector, BalancedPoolAbsoluteHalfTracksPlain) {
  const auto pool = small_pool(300, 0.5);
  const auto plain = metric_vector(pool, {MetricId::kAucPr, std::nullopt});
  const auto cal =
      metric_vector(pool, {MetricId::kAucPrC, Pi0Rule::absolute(0.5)});
  EXPECT_GE(spearman(plain, cal), 0.9);
  for (std::size_t j = 0; j < plain.size(); ++j) {
    EXPECT_NEAR(plain[j], cal[j], 0.05);
  }
}

TEST(MetricVector, MultipleOneIsExact) {
  const auto pool = small_pool(400);
  EXPECT_EQ(metric_vector(pool, {MetricId::kBestF1, std::nullopt}),
            metric_vector(pool, {MetricId::kBestF1C, Pi0Rule::multiple_of_pi(1.0)}));
}

TEST(CorrelationMatrix, SelfCorrelation) {
  const auto m = correlation_matrix(
      {small_pool(1)},
      {{MetricId::kAucRoc, std::nullopt}, {MetricId::kAucRoc, std::nullopt}});
  EXPECT_EQ(m.values, (std::vector<std::vector<double>>{{1, 1}, {1, 1}}));
}

TEST(CorrelationMatrix, SymmetricUnitDiagonalBounded) {
  const std::vector<ModelPool> pools = {small_pool(10), small_pool(11),
                                        small_pool(12)};
  const auto specs = standard_metric_specs(Pi0Rule::multiple_of_pi(1.01),
                                           Pi0Rule::absolute(0.5));
  const auto m = correlation_matrix(pools, specs);
  ASSERT_EQ(m.values.size(), 10u);
  EXPECT_EQ(m.pools_used, 3u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(m.values[i][i], 1.0);
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_EQ(m.values[i][j], m.values[j][i]);
      EXPECT_GE(m.values[i][j], -1.0);
      EXPECT_LE(m.values[i][j], 1.0);
    }
  }
}

TEST(CorrelationMatrix, PermutationInvariance) {
  const std::vector<ModelPool> pools = {small_pool(20), small_pool(21),
                                        small_pool(22)};
  const std::vector<ModelPool> rev(pools.rbegin(), pools.rend());
  std::vector<MetricSpec> specs = {{MetricId::kAucRoc, std::nullopt},
                                   {MetricId::kAucPr, std::nullopt},
                                   {MetricId::kBestF1, std::nullopt}};
  const auto a = correlation_matrix(pools, specs);
  const auto b = correlation_matrix(rev, specs);
  std::vector<MetricSpec> swapped = {specs[2], specs[0], specs[1]};
  const auto c = correlation_matrix(pools, swapped);
  const std::size_t perm[3] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(a.values[i][j], b.values[i][j], 1e-12);
      EXPECT_NEAR(c.values[i][j], a.values[perm[i]][perm[j]], 1e-12);
    }
  }
}

TEST(CorrelationMatrix, SkipsFailingPools) {
  ModelPool single_class;
  single_class.labels = {1, 1, 1};
  single_class.model_names = {"a", "b"};
  single_class.scores = {{1, 2, 3}, {3, 2, 1}};
  const auto m = correlation_matrix(
      {small_pool(30), single_class},
      {{MetricId::kAucRoc, std::nullopt}, {MetricId::kAucPr, std::nullopt}});
  EXPECT_EQ(m.pools_used, 1u);
  EXPECT_EQ(m.pools_skipped, 1u);
  EXPECT_THROW(correlation_matrix({single_class},
                                  {{MetricId::kAucRoc, std::nullopt},
                                   {MetricId::kAucPr, std::nullopt}}),
               DegenerateDataError);
}

TEST(CorrelationMatrix, ImbalancedAbsoluteHalfSidesWithRoc) {
  PoolBankConfig bank;
  bank.pools = 4;
  bank.n = 20000;
  bank.pi_min = 0.003;
  bank.pi_max = 0.009;
  bank.mu1 = 3.0;
  const auto specs = std::vector<MetricSpec>{
      {MetricId::kAucRoc, std::nullopt},
      {MetricId::kAucPr, std::nullopt},
      {MetricId::kAucPrC, Pi0Rule::absolute(0.5)}};
  const auto m = correlation_matrix(synth_pool_bank(bank), specs);
  EXPECT_GT(m.values[2][0], m.values[2][1]);
}

TEST(MatrixCsv, Layout) {
  CorrelationMatrix m{{"a", "b"}, {{1, 0.5}, {0.5, 1}}, 1, 0};
  std::ostringstream os;
  write_matrix_csv(os, m);
  EXPECT_EQ(os.str(), "metric,a,b\na,1,0.5\nb,0.5,1\n");
}

}  // namespace
}  // namespace calmetrics
