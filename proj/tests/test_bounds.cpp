#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bandit_lab/attackers.hpp"
#include "bandit_lab/bounds.hpp"
#include "support/hp_oracle.hpp"

namespace bandit_lab {
namespace {

// Frozen from tests/oracles/formulas_mp.py (80-digit mpmath).
constexpr double kThm1AttackT1e5 = 20353.132258335499494;
constexpr double kThm3DefenseT1e5 = 67893.957154680510534;

const std::vector<double> kAttackMeans{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.1, 0.2};
const std::vector<double> kDefenseMeans{1.0, 0.8, 0.9, 0.5, 0.2, 0.3, 0.1, 0.4, 0.7, 0.6};

BoundInputs attack_inputs(double horizon, double sigma = 0.1) {
  return BoundInputs::from_instance(BanditInstance(kAttackMeans, sigma), 9, 0.05, horizon);
}

BoundInputs defense_inputs(double horizon, double budget = 3000) {
  return BoundInputs::from_instance(BanditInstance(kDefenseMeans, 0.1), 9, 0.05, horizon, budget);
}

TEST(Theorem1, RegressionConstant) {
  EXPECT_NEAR(theorem1_cost_bound(attack_inputs(1e5)) / kThm1AttackT1e5, 1.0, 1e-12);
}

TEST(Theorem1, IncreasingInHorizon) {
  double prev = 0.0;
  for (double t : {1e3, 1e4, 1e5, 1e6}) {
    const double b = theorem1_cost_bound(attack_inputs(t));
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(Theorem1, IncreasingInSigma) {
  EXPECT_GT(theorem1_cost_bound(attack_inputs(1e5, 0.2)), theorem1_cost_bound(attack_inputs(1e5, 0.1)));
}

TEST(Theorem1, RejectsWorstTarget) {
  const auto in = BoundInputs::from_instance(BanditInstance(kAttackMeans, 0.1), 8, 0.05, 1e5);
  EXPECT_THROW(theorem1_cost_bound(in), ContractViolation);
}

TEST(Theorem1, RejectsShortHorizon) {
  EXPECT_NEAR(theorem1_min_horizon(10, 0.05), 13.405511653728908, 1e-12);
  EXPECT_THROW(theorem1_cost_bound(attack_inputs(10)), ContractViolation);
  EXPECT_NO_THROW(theorem1_cost_bound(attack_inputs(14)));
}

TEST(Theorem3, RegressionConstant) {
  EXPECT_NEAR(theorem3_regret_bound(defense_inputs(1e5)) / kThm3DefenseT1e5, 1.0, 1e-12);
}

TEST(Theorem3, NondecreasingInHorizon) {
  double prev = 0.0;
  for (double t = 60000; t <= 1e8; t *= 1.7) {
    const double b = theorem3_regret_bound(defense_inputs(t));
    EXPECT_GE(b, prev);
    prev = b;
  }
}

TEST(Theorem3, LargeBudgetMakesBoundLinearInA) {
  const auto b1 = theorem3_regret_bound(defense_inputs(1e12, 1e6));
  const auto b2 = theorem3_regret_bound(defense_inputs(1e12, 2e6));
  // Only the slack term is sub-linear; it is small next to the gap terms.
  EXPECT_NEAR(b2 / b1, 2.0, 0.01);
  auto in = defense_inputs(1e12, 1e6);
  double linear = 0.0;
  for (double g : in.gaps_from_best) {
    linear += in.budget_bound * (g + 2 * in.spread + moucb_warmup_slack(0.1, 10, 1e6, 0.05));
  }
  EXPECT_NEAR(b1 / linear, 1.0, 1e-12);
}

TEST(Theorem3, HugeGapPicksBudgetBranch) {
  BoundInputs in;
  in.arm_count = 2;
  in.sigma = 0.1;
  in.delta = 0.05;
  in.horizon = 1e5;
  in.budget_bound = 10;
  in.gaps_from_best = {1e9};
  in.spread = 1e9;
  const double expected = 10 * (1e9 + 2e9 + moucb_warmup_slack(0.1, 2, 10, 0.05));
  EXPECT_NEAR(theorem3_regret_bound(in) / expected, 1.0, 1e-12);
}

TEST(Theorem3, Preconditions) {
  EXPECT_THROW(theorem3_regret_bound(defense_inputs(59999)), ContractViolation);
  auto in = defense_inputs(1e5);
  in.delta = 0.4;
  EXPECT_THROW(theorem3_regret_bound(in), ContractViolation);
  in = defense_inputs(1e5, 0);
  EXPECT_THROW(theorem3_regret_bound(in), ContractViolation);
}

TEST(Lemma5, EqualMeansGiveFourBeta) {
  const std::vector<double> means(4, 0.3);
  const std::vector<std::uint64_t> counts(4, 50);
  const auto g = lemma5_gap_bounds(means, counts, 0.1, 0.05, 5, 0.0);
  EXPECT_NEAR(g.lower_expr, 4 * moucb_beta(50, 0.1, 4, 0.05), 1e-15);
  EXPECT_GT(g.lower_expr, 0.0);
}

TEST(Lemma5, LowerExprIsShiftInvariant) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> means(5), shifted(5);
    std::vector<std::uint64_t> counts(5);
    const double c = u(gen);
    for (int a = 0; a < 5; ++a) {
      means[a] = u(gen);
      shifted[a] = means[a] + c;
      counts[a] = 10 + static_cast<std::uint64_t>(gen() % 1000);
    }
    EXPECT_NEAR(lemma5_gap_bounds(means, counts, 0.1, 0.05, 5, 0.5).lower_expr,
                lemma5_gap_bounds(shifted, counts, 0.1, 0.05, 5, 0.5).lower_expr, 1e-12);
  }
}

TEST(Lemma5, Preconditions) {
  const std::vector<double> means{0.1, 0.2};
  EXPECT_THROW(lemma5_gap_bounds(means, std::vector<std::uint64_t>{3, 10}, 0.1, 0.05, 2, 0.1), ContractViolation);
  EXPECT_THROW(lemma5_gap_bounds(means, std::vector<std::uint64_t>{30, 10}, 0.1, 0.5, 2, 0.1), ConfigError);
}

// Independent 50-digit evaluator on random valid inputs.
class FormulaRegression : public ::testing::Test {
 protected:
  std::mt19937_64 gen{2024};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen);
  }
  // K distinct means so best/worst gaps are positive.
  std::vector<double> random_means(std::size_t k) {
    std::vector<double> m(k);
    for (auto& v : m) v = uniform(0.0, 1.0);
    return m;
  }
};

TEST_F(FormulaRegression, Cb) {
  for (int i = 0; i < 100; ++i) {
    const auto n = uniform_int(1, 10'000'000);
    const double s = uniform(0.01, 2.0), d = uniform(1e-4, 0.99);
    const auto k = uniform_int(2, 50);
    EXPECT_LT(hp::rel_err(cb(n, s, k, d), hp::cb(n, s, k, d)), 1e-10);
  }
}

TEST_F(FormulaRegression, Beta) {
  for (int i = 0; i < 100; ++i) {
    const auto n = uniform_int(1, 10'000'000);
    const double s = uniform(0.01, 2.0), d = uniform(1e-4, 1.0 / 3.0);
    const auto k = uniform_int(2, 50);
    EXPECT_LT(hp::rel_err(moucb_beta(n, s, k, d), hp::beta(n, s, k, d)), 1e-10);
  }
}

TEST_F(FormulaRegression, Theorem1) {
  for (int i = 0; i < 100; ++i) {
    const auto k = uniform_int(2, 20);
    const auto mu = random_means(k);
    const Arm worst = hp::worst_of(mu);
    Arm target = uniform_int(0, k - 1);
    if (target == worst) target = (target + 1) % k;
    const double s = uniform(0.01, 1.0), d = uniform(1e-3, 0.5), t = std::round(uniform(1e3, 1e8));
    const auto in = BoundInputs::from_instance(BanditInstance(mu, s), target, d, t);
    EXPECT_LT(hp::rel_err(theorem1_cost_bound(in), hp::thm1(mu, target, s, d, t)), 1e-10);
  }
}

TEST_F(FormulaRegression, Theorem3) {
  for (int i = 0; i < 100; ++i) {
    const auto k = uniform_int(2, 20);
    const auto mu = random_means(k);
    const double s = uniform(0.01, 1.0), d = uniform(1e-3, 1.0 / 3.0);
    const double a = static_cast<double>(uniform_int(1, 5000));
    const double t = std::max(2 * a * static_cast<double>(k), std::round(uniform(1e3, 1e9)));
    const auto in = BoundInputs::from_instance(BanditInstance(mu, s), 0, d, t, a);
    EXPECT_LT(hp::rel_err(theorem3_regret_bound(in), hp::thm3(mu, s, d, t, a)), 1e-10);
  }
}

}  // namespace
}  // namespace bandit_lab
