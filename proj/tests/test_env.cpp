#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bandit_lab/env.hpp"

namespace bandit_lab {
namespace {

const std::vector<double> kAttackMeans{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.1, 0.2};

TEST(BanditInstance, RejectsSingleArm) { EXPECT_THROW(BanditInstance({0.5}, 0.1), ConfigError); }

TEST(BanditInstance, RejectsNonPositiveSigma) {
  EXPECT_THROW(BanditInstance({0.5, 0.4}, 0.0), ConfigError);
  EXPECT_THROW(BanditInstance({0.5, 0.4}, -1.0), ConfigError);
}

TEST(BanditInstance, BestAndWorstArms) {
  const BanditInstance inst(kAttackMeans, 0.1);
  EXPECT_EQ(best_arm(inst), 0u);   // arm 1
  EXPECT_EQ(worst_arm(inst), 8u);  // arm 9
}

TEST(BanditInstance, TiesGoToLowestIndex) {
  const BanditInstance inst({0.3, 0.7, 0.7, 0.3}, 0.1);
  EXPECT_EQ(best_arm(inst), 1u);
  EXPECT_EQ(worst_arm(inst), 0u);
}

TEST(Gap, TargetToWorst) {
  const BanditInstance inst(kAttackMeans, 0.1);
  EXPECT_NEAR(gap(inst, 9, 8), 0.1, 1e-15);
  EXPECT_EQ(gap(inst, 4, 4), 0.0);
  for (Arm i = 0; i < 10; ++i) {
    for (Arm j = 0; j < 10; ++j) EXPECT_EQ(gap(inst, i, j), -gap(inst, j, i));
  }
}

TEST(Gap, InvalidIndex) {
  const BanditInstance inst(kAttackMeans, 0.1);
  EXPECT_THROW(gap(inst, 10, 0), ContractViolation);
}

TEST(SampleReward, DegenerateVariance) {
  const BanditInstance inst(kAttackMeans, 1e-12);
  RngStream rng(3, 0);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_reward(inst, 2, rng), 0.8, 1e-9);
}

TEST(SampleReward, OutOfRangeArm) {
  const BanditInstance inst(kAttackMeans, 0.1);
  RngStream rng(3, 0);
  EXPECT_THROW(sample_reward(inst, 10, rng), ContractViolation);
}

TEST(SampleReward, MomentsMatchLawOfLargeNumbers) {
  const BanditInstance inst({1.0, 0.0}, 0.1);
  RngStream rng(11, 0);
  constexpr int n = 1'000'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = sample_reward(inst, 0, rng);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 1.0, 0.001);
  EXPECT_NEAR(sd, 0.1, 0.002);
}

TEST(RngStream, SameSeedSameSequence) {
  const BanditInstance inst(kAttackMeans, 0.1);
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double ra = sample_reward(inst, i % 10, a);
    EXPECT_EQ(ra, sample_reward(inst, i % 10, b));
    any_diff |= ra != sample_reward(inst, i % 10, c);
  }
  EXPECT_TRUE(any_diff);
}

TEST(RngStream, DistinctStreamsLookIndependent) {
  // Correlation of paired standard normals from adjacent streams.
  constexpr int n = 200000;
  RngStream a(5, 0), b(5, 1);
  double sxy = 0.0;
  for (int i = 0; i < n; ++i) sxy += a.standard_normal() * b.standard_normal();
  EXPECT_LT(std::abs(sxy / n), 5.0 / std::sqrt(n));
}

// Hoeffding sanity check: the mean of N draws leaves the
// sqrt(2 sigma^2 / N log(2 / d)) band in at most a d fraction of repetitions.
TEST(SampleReward, HoeffdingBandCoverage) {
  const BanditInstance inst({0.4, 0.2}, 0.5);
  constexpr int reps = 4000, draws = 50;
  constexpr double d = 0.05;
  const double radius = std::sqrt(2.0 * 0.25 / draws * std::log(2.0 / d));
  int outside = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(99, r);
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += sample_reward(inst, 0, rng);
    outside += std::abs(sum / draws - 0.4) > radius;
  }
  EXPECT_LE(static_cast<double>(outside) / reps, d);
}

}  // namespace
}  // namespace bandit_lab
