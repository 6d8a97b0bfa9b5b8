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

// Inequality checkers that run against sequences and trajectories. Each one
// reports the quantities on both sides rather than only a verdict, and
// separates 0/0 cases into a "degenerate" status.

#ifndef OPTDYN_DIAGNOSTICS_H_
#define OPTDYN_DIAGNOSTICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "optdyn/dynamics.h"
#include "optdyn/learners.h"

namespace optdyn {

enum class CheckStatus { kHolds, kFails, kDegenerate };
const char* StatusName(CheckStatus status);

// Circular-difference Cauchy inequality. Premise:
//   sum (D~^2 W)^2 <= alpha * sum (D~^1 W)^2 + mu.
// Conclusion:
//   sum (D~^1 W)^2 <= alpha * sum_t (W^t)^2 + mu / alpha,
// with all sums over t = 0..S-1.
struct FreqCauchyCheck {
  double alpha = 0.0;
  double mu = 0.0;
  double sum_w_sq = 0.0;
  double sum_d1_sq = 0.0;
  double sum_d2_sq = 0.0;
  bool premise_holds = false;
  bool conclusion_holds = false;
  double premise_slack = 0.0;     // rhs - lhs of the premise
  double conclusion_slack = 0.0;  // rhs - lhs of the conclusion
  bool degenerate = false;        // ratio mode with sum (D~^1 W)^2 = 0
};

// Throws std::invalid_argument unless alpha > 0.
FreqCauchyCheck CheckFreqCauchy(std::span<const double> seq, double alpha,
                                double mu);
// mu = 0 and alpha = sum (D~^2 W)^2 / sum (D~^1 W)^2, the tightest premise.
// Constant-difference sequences (zero denominator) come back degenerate.
FreqCauchyCheck CheckFreqCauchyAtPremiseRatio(std::span<const double> seq);

struct ClosenessStep {
  std::int64_t step = 0;  // compares P^step and P^{step+1}, 1-indexed
  int coordinate = 0;     // 0-indexed
  double ratio = 1.0;
};

struct ClosenessReport {
  // max_t max(||P^t / P^{t+1}||_inf, ||P^{t+1} / P^t||_inf) - 1.
  double zeta = 0.0;
  bool finite = true;  // false when some coordinate is zero
  std::vector<ClosenessStep> steps;
};

ClosenessReport ConsecutiveCloseness(const std::vector<Strategy>& sequence);
ClosenessReport ConsecutiveCloseness(const Trajectory& trajectory, int player);

struct VarianceSums {
  double delta = 0.0;  // sum_t Var_{x^t}[l^t - l^{t-1}]
  double prev = 0.0;   // sum_t Var_{x^t}[l^{t-1}]
};

VarianceSums ComputeVarianceSums(const Trajectory& trajectory, int player);

// Terms of the adversarial OptHedge regret bound
//   Reg <= ln(n)/eta + sum (eta/2 + C eta^2) Var[dl]
//                   - sum ((1 - C eta) eta / 2) Var[l^{t-1}],
// which is linear in C with slope eta^2 (sum_var_delta + sum_var_prev / 2).
struct BoundTermBreakdown {
  int player = 0;
  double eta = 0.0;
  double lhs = 0.0;             // Reg_i(T)
  double term_log = 0.0;        // ln(n_i) / eta
  double term_log_base2 = 0.0;  // log2(n_i) / eta, for reference
  double sum_var_delta = 0.0;
  double sum_var_prev = 0.0;
  double rhs_at_zero = 0.0;  // right-hand side with C = 0
  double c_slope = 0.0;
  // Smallest C >= 0 making the bound hold; empty when it fails for every C.
  std::optional<double> minimal_constant;
  bool holds_at_zero = false;
  // minimal_constant * eta < 1, the step-size condition of the bound.
  bool admissible = false;
};

// Throws std::invalid_argument when the player did not run OptHedge with a
// fixed step size (hedge, or an adaptive learner that switched).
BoundTermBreakdown BoundTermsOptHedge(const Trajectory& trajectory,
                                      int player);

// sum Var[dl] <= 0.5 sum Var[l^{t-1}] + C' ceil(log2 T)^5.
struct VarianceInequalityCheck {
  int player = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double sum_var_prev = 0.0;
  int horizon_exponent = 0;
  bool holds = false;
  // lhs / sum_var_prev, constant-free; empty (degenerate) when both are 0.
  std::optional<double> ratio;
  CheckStatus ratio_status = CheckStatus::kDegenerate;
};

// Throws std::invalid_argument unless every player ran OptHedge with one
// common step size.
VarianceInequalityCheck CheckVarianceInequality(
    const Trajectory& trajectory, int player,
    const BoundConstants& constants = {});

nlohmann::json ToJson(const BoundTermBreakdown& b);
nlohmann::json ToJson(const VarianceInequalityCheck& c);
nlohmann::json ToJson(const ClosenessReport& c);
nlohmann::json ToJson(const FreqCauchyCheck& c);

}  // namespace optdyn

#endif  // OPTDYN_DIAGNOSTICS_H_
