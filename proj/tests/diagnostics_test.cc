// Copyright 2026 The optdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optdyn/diagnostics.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace optdyn {
namespace {

using Vec = std::vector<double>;

constexpr double kCloseness03 = 0.349858807576003103983744313328;  // e^0.3 - 1

double SumSq(const Vec& v) {
  long double acc = 0;
  for (double x : v) acc += static_cast<long double>(x) * x;
  return static_cast<double>(acc);
}

VarianceSums BruteVarianceSums(const Trajectory& t, int player) {
  long double delta = 0, prev = 0;
  for (std::int64_t s = 1; s <= t.rounds; ++s) {
    const LossVector l = t.LossOrZero(s, player);
    const LossVector p = t.LossOrZero(s - 1, player);
    Vec d(l.size());
    for (size_t j = 0; j < l.size(); ++j) d[j] = l[j] - p[j];
    delta += oracle::Variance(t.strategies[s - 1][player], d);
    prev += oracle::Variance(t.strategies[s - 1][player], p);
  }
  return {static_cast<double>(delta), static_cast<double>(prev)};
}

Trajectory OptHedgeRun(const Game& g, double eta, std::int64_t rounds) {
  return optdyn::Run(g, {LearnerConfig{LearnerMode::kOptHedge, eta}}, rounds);
}

TEST(FreqCauchyTest, ConstantSequence) {
  const FreqCauchyCheck c = CheckFreqCauchy(Vec(16, 0.7), 0.5, 0.0);
  EXPECT_EQ(c.sum_d1_sq, 0.0);
  EXPECT_EQ(c.sum_d2_sq, 0.0);
  EXPECT_TRUE(c.premise_holds);
  EXPECT_TRUE(c.conclusion_holds);
  EXPECT_TRUE(CheckFreqCauchyAtPremiseRatio(Vec(16, 0.7)).degenerate);
  EXPECT_THROW(CheckFreqCauchy(Vec(4, 0.0), 0.0, 0.0), std::invalid_argument);
}

TEST(FreqCauchyTest, AlternatingSumsMatchBruteForce) {
  const Vec w = {0, 1, 0, 1, 0, 1, 0, 1};
  const FreqCauchyCheck c = CheckFreqCauchy(w, 1.0, 0.0);
  EXPECT_EQ(c.sum_w_sq, SumSq(w));
  EXPECT_EQ(c.sum_d1_sq, SumSq(oracle::CircularDifference(w, 1)));
  EXPECT_EQ(c.sum_d2_sq, SumSq(oracle::CircularDifference(w, 2)));
  EXPECT_EQ(c.sum_w_sq, 4.0);
  EXPECT_EQ(c.sum_d1_sq, 8.0);
  EXPECT_EQ(c.sum_d2_sq, 32.0);
  EXPECT_FALSE(c.premise_holds);
}

TEST(FreqCauchyTest, RandomSequencesAtPremiseRatio) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t size = 2 + rng() % 255;
    const Vec w = oracle::RandomSequence(rng, size);
    const FreqCauchyCheck c = CheckFreqCauchyAtPremiseRatio(w);
    ASSERT_FALSE(c.degenerate);
    EXPECT_NEAR(c.alpha, SumSq(oracle::CircularDifference(w, 2)) /
                             SumSq(oracle::CircularDifference(w, 1)),
                1e-12 * c.alpha);
    EXPECT_TRUE(c.conclusion_holds);
    EXPECT_GE(c.conclusion_slack, -1e-10);
  }
}

TEST(FreqCauchyTest, SmoothSequenceIsTight) {
  // A single Fourier mode makes both inequalities near equalities.
  Vec w(64);
  for (size_t t = 0; t < w.size(); ++t) w[t] = std::cos(2 * M_PI * 3 * t / 64);
  const FreqCauchyCheck c = CheckFreqCauchyAtPremiseRatio(w);
  EXPECT_NEAR(c.conclusion_slack, 0.0, 1e-10 * c.sum_d1_sq);
}

TEST(ClosenessTest, Examples) {
  const std::vector<Strategy> constant(5, Strategy{0.2, 0.8});
  EXPECT_EQ(ConsecutiveCloseness(constant).zeta, 0.0);

  const ClosenessReport two = ConsecutiveCloseness({{0.5, 0.5}, {0.55, 0.45}});
  // max(0.55/0.5, 0.5/0.45) - 1 with 0.5/0.45 = 1.111...
  EXPECT_NEAR(two.zeta, std::max(0.55 / 0.5, 0.5 / 0.45) - 1, 1e-15);
  ASSERT_EQ(two.steps.size(), 1u);
  EXPECT_EQ(two.steps[0].step, 1);

  const ClosenessReport zero = ConsecutiveCloseness({{1.0, 0.0}, {0.5, 0.5}});
  EXPECT_FALSE(zero.finite);
}

TEST(ClosenessTest, OptHedgeWithinBound) {
  const Trajectory t = OptHedgeRun(NamedGame("matching_pennies"), 0.05, 500);
  for (int i = 0; i < 2; ++i) {
    const ClosenessReport r = ConsecutiveCloseness(t, i);
    EXPECT_TRUE(r.finite);
    EXPECT_LE(r.zeta, kCloseness03);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Trajectory u = OptHedgeRun(RandomGame(3, {2, 2, 3}, seed), 0.1, 300);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LE(ConsecutiveCloseness(u, i).zeta, std::expm1(0.6));
    }
  }
}

TEST(VarianceSumsTest, MatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Trajectory t = OptHedgeRun(RandomGame(2, {3, 4}, seed), 0.05, 1000);
    for (int i = 0; i < 2; ++i) {
      const VarianceSums got = ComputeVarianceSums(t, i);
      const VarianceSums want = BruteVarianceSums(t, i);
      EXPECT_NEAR(got.delta, want.delta, 1e-9 * std::max(1.0, want.delta));
      EXPECT_NEAR(got.prev, want.prev, 1e-9 * std::max(1.0, want.prev));
    }
  }
}

TEST(BoundTermsTest, ConstantLosses) {
  Game g({2, 2}, {Vec(4, 0.4), Vec(4, 0.6)});
  const Trajectory t = OptHedgeRun(g, 0.05, 100);
  const BoundTermBreakdown b = BoundTermsOptHedge(t, 0);
  EXPECT_NEAR(b.lhs, 0.0, 1e-12);
  EXPECT_NEAR(b.sum_var_delta, 0.0, 1e-24);
  EXPECT_NEAR(b.sum_var_prev, 0.0, 1e-24);
  EXPECT_TRUE(b.holds_at_zero);
  EXPECT_EQ(b.minimal_constant, 0.0);
  EXPECT_TRUE(b.admissible);
}

TEST(BoundTermsTest, MatchingPenniesFinite) {
  const Trajectory t = OptHedgeRun(NamedGame("matching_pennies"), 0.05, 1 << 10);
  for (int i = 0; i < 2; ++i) {
    const BoundTermBreakdown b = BoundTermsOptHedge(t, i);
    ASSERT_TRUE(b.minimal_constant.has_value());
    EXPECT_TRUE(std::isfinite(*b.minimal_constant));
    EXPECT_NEAR(b.term_log, std::log(2.0) / 0.05, 1e-12);
    EXPECT_NEAR(b.term_log_base2, 1.0 / 0.05, 1e-12);
    const VarianceSums want = BruteVarianceSums(t, i);
    EXPECT_NEAR(b.sum_var_delta, want.delta, 1e-9 * std::max(1.0, want.delta));
    EXPECT_NEAR(b.sum_var_prev, want.prev, 1e-9 * std::max(1.0, want.prev));
    // Reconstruct the bound at C*.
    const double c = *b.minimal_constant;
    const double rhs = b.term_log + (b.eta / 2 + c * b.eta * b.eta) * b.sum_var_delta -
                       (1 - c * b.eta) * b.eta / 2 * b.sum_var_prev;
    EXPECT_LE(b.lhs, rhs + 1e-9);
  }
}

TEST(BoundTermsTest, RandomGamesHaveFiniteConstant) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Trajectory t = OptHedgeRun(RandomGame(2, {3, 3}, seed), 0.05, 2048);
    for (int i = 0; i < 2; ++i) {
      const BoundTermBreakdown b = BoundTermsOptHedge(t, i);
      ASSERT_TRUE(b.minimal_constant.has_value()) << "seed " << seed;
      if (!b.holds_at_zero) {
        EXPECT_NEAR(b.lhs, b.rhs_at_zero + *b.minimal_constant * b.c_slope,
                    1e-9 * std::max(1.0, std::abs(b.lhs)));
      }
    }
  }
}

TEST(BoundTermsTest, HalvingStepSizeShrinksDeltaVariance) {
  const Game g = RandomGame(2, {2, 2}, 3);
  const auto a = BoundTermsOptHedge(OptHedgeRun(g, 0.05, 1 << 10), 0);
  const auto b = BoundTermsOptHedge(OptHedgeRun(g, 0.025, 1 << 10), 0);
  EXPECT_LT(b.sum_var_delta, a.sum_var_delta);
}

TEST(BoundTermsTest, RejectsHedge) {
  const Trajectory t = optdyn::Run(NamedGame("matching_pennies"),
                           {LearnerConfig{LearnerMode::kHedge, 0.05}}, 10);
  EXPECT_THROW(BoundTermsOptHedge(t, 0), std::invalid_argument);
}

TEST(VarianceInequalityTest, VacuousWithDefaultConstant) {
  const Trajectory t = OptHedgeRun(RandomGame(2, {2, 3}, 1), 0.05, 1 << 12);
  const VarianceInequalityCheck c = CheckVarianceInequality(t, 0);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.horizon_exponent, 12);
  EXPECT_GE(c.rhs, 165262.0 * std::pow(12.0, 5));
  ASSERT_TRUE(c.ratio.has_value());
  EXPECT_NEAR(*c.ratio, c.lhs / c.sum_var_prev, 1e-15);
  EXPECT_NE(c.ratio_status, CheckStatus::kDegenerate);
}

TEST(VarianceInequalityTest, ConstantLossesAreDegenerate) {
  Game g({2, 2}, {Vec(4, 0.4), Vec(4, 0.6)});
  const VarianceInequalityCheck c = CheckVarianceInequality(OptHedgeRun(g, 0.05, 64), 0);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_FALSE(c.ratio.has_value());
  EXPECT_EQ(c.ratio_status, CheckStatus::kDegenerate);
  EXPECT_TRUE(c.holds);
}

TEST(VarianceInequalityTest, SmallerStepGivesSmallerRatio) {
  // Asymmetric matching pennies; the symmetric one never leaves equilibrium.
  Game g({2, 2}, {{1, 0, 0, 0.5}, {0, 1, 1, 0.5}});
  const auto at = [&](double eta) {
    return *CheckVarianceInequality(OptHedgeRun(g, eta, 1 << 12), 0).ratio;
  };
  EXPECT_LT(at(0.01), at(0.04));
}

TEST(VarianceInequalityTest, RequiresCommonOptHedge) {
  const Trajectory t = optdyn::Run(NamedGame("matching_pennies"),
                           {LearnerConfig{LearnerMode::kOptHedge, 0.05},
                            LearnerConfig{LearnerMode::kOptHedge, 0.1}},
                           10);
  EXPECT_THROW(CheckVarianceInequality(t, 0), std::invalid_argument);
}

TEST(DiagnosticsJsonTest, Fields) {
  const Trajectory t = OptHedgeRun(NamedGame("matching_pennies"), 0.05, 64);
  const auto j = ToJson(BoundTermsOptHedge(t, 0));
  EXPECT_TRUE(j.contains("minimal_constant"));
  EXPECT_EQ(j["player"], 1);
  const auto v = ToJson(CheckVarianceInequality(t, 0));
  EXPECT_EQ(v["ratio_status"], "degenerate");
}

}  // namespace
}  // namespace optdyn
