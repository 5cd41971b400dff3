#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bandit_lab/attackers.hpp"
#include "support/hp_oracle.hpp"

namespace bandit_lab {
namespace {

constexpr double kCb1 = 0.36025448920391618069;  // sigma=0.1, K=10, delta=0.05, N=1

const std::vector<double> kAttackMeans{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.1, 0.2};

AttackerParams params(Arm target, std::optional<std::uint64_t> cap = {}) {
  return AttackerParams{target, 0.1, 0.05, cap};
}

// Feed `rounds` observations per arm with the given constant rewards.
template <class A>
void seed_observations(A& attacker, const std::vector<double>& rewards, int rounds) {
  for (int r = 0; r < rounds; ++r) {
    for (Arm a = 0; a < rewards.size(); ++a) attacker_update(attacker, a, a, rewards[a]);
  }
}

TEST(Cb, MatchesHighPrecisionExample) { EXPECT_NEAR(cb(1, 0.1, 10, 0.05), kCb1, 1e-14); }

TEST(Cb, QuadruplingCountShrinksRadius) {
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) ASSERT_LT(cb(4 * n, 0.1, 10, 0.05), cb(n, 0.1, 10, 0.05));
}

TEST(Cb, DomainEdges) {
  EXPECT_GT(cb(1, 0.1, 1, 0.999999), 0.0);
  EXPECT_THROW(cb(0, 0.1, 10, 0.05), ContractViolation);
}

TEST(NullAttacker, NeverChangesArm) {
  NullAttacker atk(4, params(3));
  for (Arm a = 0; a < 4; ++a) EXPECT_EQ(attack(atk, a), a);
}

TEST(OracleAttacker, RedirectsToWorstArm) {
  const BanditInstance inst(kAttackMeans, 0.1);
  OracleAttacker atk(inst, params(9));
  EXPECT_EQ(attack(atk, 0), 8u);
  EXPECT_EQ(attack(atk, 9), 9u);
}

TEST(OracleAttacker, StopsAtCostCap) {
  const BanditInstance inst(kAttackMeans, 0.1);
  OracleAttacker atk(inst, params(9, 2));
  for (int i = 0; i < 2; ++i) {
    const Arm post = attack(atk, 0);
    EXPECT_EQ(post, 8u);
    attacker_update(atk, 0, post, 0.1);
  }
  EXPECT_EQ(atk.state.cost, 2u);
  EXPECT_EQ(attack(atk, 0), 0u);
}

TEST(LcbAttacker, NoAttackDuringFirstKRounds) {
  LcbAttacker atk(10, params(9));
  seed_observations(atk, std::vector<double>(10, 0.5), 0);
  for (int r = 0; r < 2; ++r) attacker_update(atk, r, r, 0.5);
  EXPECT_EQ(atk.state.stats.rounds + 1, 3u);
  EXPECT_EQ(attack(atk, 4), 4u);
}

TEST(LcbAttacker, LeavesTargetAlone) {
  LcbAttacker atk(3, params(2));
  seed_observations(atk, {0.5, 0.3, 0.4}, 5);
  EXPECT_EQ(attack(atk, 2), 2u);
}

TEST(LcbAttacker, EqualCountsPickLowestMean) {
  LcbAttacker atk(3, params(2));
  seed_observations(atk, {0.5, 0.3, 0.4}, 5);
  EXPECT_EQ(atk.state.stats.counts, (std::vector<std::uint64_t>{5, 5, 5}));
  EXPECT_EQ(attack(atk, 0), 1u);
}

TEST(LcbAttacker, ArgminMayLandOnTarget) {
  LcbAttacker atk(3, params(2));
  seed_observations(atk, {0.5, 0.4, 0.1}, 5);
  EXPECT_EQ(attack(atk, 0), 2u);
}

TEST(LcbAttacker, ShiftInvariance) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pulls(1, 30);
  for (int rep = 0; rep < 300; ++rep) {
    LcbAttacker a(5, params(4)), b(5, params(4));
    const double shift = 3 * u(gen);
    for (Arm arm = 0; arm < 5; ++arm) {
      const int n = pulls(gen);
      const double m = u(gen);
      for (int i = 0; i < n; ++i) {
        attacker_update(a, arm, arm, m);
        attacker_update(b, arm, arm, m + shift);
      }
    }
    EXPECT_EQ(attack(a, 0), attack(b, 0));
  }
}

TEST(AttackerUpdate, RoutesToPostArmAndCountsCost) {
  LcbAttacker atk(10, params(9));
  for (Arm a = 0; a < 10; ++a) attacker_update(atk, a, a, 0.5);
  EXPECT_EQ(atk.state.stats.counts, std::vector<std::uint64_t>(10, 1));
  for (int i = 0; i < 50; ++i) attacker_update(atk, 0, 8, 0.2);
  EXPECT_NEAR(atk.state.stats.mean(8), (0.2 * 50 + 0.5) / 51, 1e-14);
  EXPECT_EQ(atk.state.cost, 50u);
  std::uint64_t total = 0;
  for (auto c : atk.state.stats.counts) total += c;
  EXPECT_EQ(total, atk.state.stats.rounds);
}

TEST(AttackerUpdate, ConstantRewardsOnOneArm) {
  NullAttacker atk(10, params(9));
  for (int i = 0; i < 50; ++i) attacker_update(atk, 8, 8, 0.2);
  EXPECT_NEAR(atk.state.stats.mean(8), 0.2, 1e-15);
  EXPECT_EQ(atk.state.cost, 0u);
}

TEST(AttackerState, RejectsBadTarget) { EXPECT_THROW(NullAttacker(3, params(3)), ConfigError); }

}  // namespace
}  // namespace bandit_lab
