#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "actionraid/stats.hpp"
#include "support/oracles.hpp"

using namespace actionraid;

namespace {

struct MwCase {
  std::vector<double> x, y;
  double u, p;
};

}  // namespace

TEST(Stats, QuantilesMatchNumpyLinear) {
  // numpy.quantile(xs, q), default method
  const std::vector<double> xs{0.3, -1.2, 4.5, 2.2, 2.2, 9.1, 0.0, 7.7};
  EXPECT_DOUBLE_EQ(stats::quantile(xs, 0.0), -1.2);
  EXPECT_NEAR(stats::quantile(xs, 0.25), 0.22499999999999998, 1e-15);
  EXPECT_DOUBLE_EQ(stats::quantile(xs, 0.5), 2.2);
  EXPECT_NEAR(stats::quantile(xs, 0.75), 5.3, 1e-15);
  EXPECT_DOUBLE_EQ(stats::quantile(xs, 1.0), 9.1);
  EXPECT_DOUBLE_EQ(stats::median(xs), 2.2);
}

TEST(Stats, MeanAndStd) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(stats::mean(xs), 5.0);
  EXPECT_NEAR(stats::sample_std(xs), std::sqrt(32.0 / 7.0), 1e-15);
  const std::vector<double> one{3.0};
  EXPECT_EQ(stats::sample_std(one), 0.0);
}

TEST(Stats, GiniMatchesPairwiseOracle) {
  EXPECT_EQ(stats::gini(std::vector<double>{}), 0.0);
  EXPECT_EQ(stats::gini(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(stats::gini(std::vector<double>{1, 1, 1, 1}), 0.0);
  EXPECT_NEAR(stats::gini(std::vector<double>{0, 0, 0, 1}), 0.75, 1e-15);

  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(1 + trial % 40);
    for (double& x : xs) x = trial % 3 == 0 ? std::floor(e(rng) * 3.0) : e(rng);
    EXPECT_NEAR(stats::gini(xs), oracle::gini(xs), 1e-12);
  }
}

TEST(Stats, MannWhitneyMatchesScipy) {
  // scipy.stats.mannwhitneyu(x, y, alternative='less', method='asymptotic')
  const std::vector<MwCase> cases{
      {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}, 0.0, 0.006092890177672406},
      {{1.5, 2.5, 2.5, 4, 7, 7}, {2.5, 3, 7, 8, 9, 9.5, 10}, 8.0, 0.0354851835741398},
      {{3, 1, 4, 1, 5, 9, 2, 6}, {2, 7, 1, 8, 2, 8, 1, 8}, 29.0, 0.3950818593120448},
      {{10, 11, 12}, {1, 2, 3}, 9.0, 0.9854518341293739},
  };
  for (const auto& c : cases) {
    const auto r = stats::mann_whitney_less(c.x, c.y);
    EXPECT_DOUBLE_EQ(r.u, c.u);
    EXPECT_NEAR(r.p_value, c.p, 1e-12);
  }
}
