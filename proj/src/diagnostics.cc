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
#include <limits>
#include <stdexcept>
#include <string>

#include "optdyn/divergences.h"
#include "optdyn/finite_difference.h"

namespace optdyn {
namespace {

double SumOfSquares(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x * x;
  return total;
}

// Below this the C-coefficient is treated as zero.
constexpr double kSlopeFloor = 1e-15;

bool FixedStepOptHedge(const Trajectory& trajectory, int player) {
  const LearnerMode mode = trajectory.metadata.modes.at(player);
  if (mode == LearnerMode::kOptHedge) return true;
  if (mode != LearnerMode::kAdaptiveOptHedge) return false;
  const auto& switches = trajectory.metadata.switch_rounds;
  return player >= static_cast<int>(switches.size()) ||
         !switches[player].has_value();
}

template <typename T>
nlohmann::json OptionalJson(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

const char* StatusName(CheckStatus status) {
  switch (status) {
    case CheckStatus::kHolds:
      return "holds";
    case CheckStatus::kFails:
      return "fails";
    case CheckStatus::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

FreqCauchyCheck CheckFreqCauchy(std::span<const double> seq, double alpha,
                                double mu) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  FreqCauchyCheck out;
  out.alpha = alpha;
  out.mu = mu;
  out.sum_w_sq = SumOfSquares(seq);
  out.sum_d1_sq = SumOfSquares(CircularFiniteDifference(seq, 1));
  out.sum_d2_sq = SumOfSquares(CircularFiniteDifference(seq, 2));
  out.premise_slack = alpha * out.sum_d1_sq + mu - out.sum_d2_sq;
  out.conclusion_slack = alpha * out.sum_w_sq + mu / alpha - out.sum_d1_sq;
  out.premise_holds = out.premise_slack >= 0.0;
  out.conclusion_holds = out.conclusion_slack >= 0.0;
  return out;
}

FreqCauchyCheck CheckFreqCauchyAtPremiseRatio(std::span<const double> seq) {
  const double d1 = SumOfSquares(CircularFiniteDifference(seq, 1));
  if (d1 == 0.0) {
    FreqCauchyCheck out;
    out.sum_w_sq = SumOfSquares(seq);
    out.degenerate = true;
    out.premise_holds = true;
    out.conclusion_holds = true;
    return out;
  }
  const double d2 = SumOfSquares(CircularFiniteDifference(seq, 2));
  return CheckFreqCauchy(seq, d2 / d1, 0.0);
}

ClosenessReport ConsecutiveCloseness(const std::vector<Strategy>& sequence) {
  ClosenessReport report;
  double worst = 1.0;
  for (size_t t = 0; t + 1 < sequence.size(); ++t) {
    const Strategy& p = sequence[t];
    const Strategy& q = sequence[t + 1];
    if (p.size() != q.size()) {
      throw std::invalid_argument("distributions of different lengths");
    }
    ClosenessStep step;
    step.step = static_cast<std::int64_t>(t) + 1;
    for (size_t j = 0; j < p.size(); ++j) {
      double r;
      if (p[j] <= 0.0 || q[j] <= 0.0) {
        r = std::numeric_limits<double>::infinity();
        report.finite = false;
      } else {
        r = std::max(p[j] / q[j], q[j] / p[j]);
      }
      if (r > step.ratio) {
        step.ratio = r;
        step.coordinate = static_cast<int>(j);
      }
    }
    worst = std::max(worst, step.ratio);
    report.steps.push_back(step);
  }
  report.zeta = worst - 1.0;
  return report;
}

ClosenessReport ConsecutiveCloseness(const Trajectory& trajectory,
                                     int player) {
  std::vector<Strategy> seq;
  seq.reserve(trajectory.rounds);
  for (const auto& round : trajectory.strategies) seq.push_back(round[player]);
  return ConsecutiveCloseness(seq);
}

VarianceSums ComputeVarianceSums(const Trajectory& trajectory, int player) {
  VarianceSums sums;
  const int n = trajectory.game.num_actions(player);
  std::vector<double> prev(n, 0.0);
  std::vector<double> delta(n);
  for (std::int64_t t = 0; t < trajectory.rounds; ++t) {
    const Strategy& x = trajectory.strategies[t][player];
    const LossVector& l = trajectory.losses[t][player];
    for (int j = 0; j < n; ++j) delta[j] = l[j] - prev[j];
    sums.delta += Variance(x, delta);
    sums.prev += Variance(x, prev);
    prev = l;
  }
  return sums;
}

BoundTermBreakdown BoundTermsOptHedge(const Trajectory& trajectory,
                                      int player) {
  if (!FixedStepOptHedge(trajectory, player)) {
    throw std::invalid_argument(
        "bound terms need a fixed-step OptHedge player; player " +
        std::to_string(player + 1) + " ran " +
        std::string(ModeName(trajectory.metadata.modes.at(player))));
  }
  BoundTermBreakdown b;
  b.player = player;
  b.eta = trajectory.metadata.etas.at(player);
  b.lhs = Regret(trajectory, player).total_regret;
  const double n = trajectory.game.num_actions(player);
  b.term_log = std::log(n) / b.eta;
  b.term_log_base2 = std::log2(n) / b.eta;
  const VarianceSums sums = ComputeVarianceSums(trajectory, player);
  b.sum_var_delta = sums.delta;
  b.sum_var_prev = sums.prev;
  b.rhs_at_zero =
      b.term_log + 0.5 * b.eta * (b.sum_var_delta - b.sum_var_prev);
  b.c_slope = b.eta * b.eta * (b.sum_var_delta + 0.5 * b.sum_var_prev);
  if (b.lhs <= b.rhs_at_zero) {
    b.holds_at_zero = true;
    b.minimal_constant = 0.0;
  } else if (b.c_slope >= kSlopeFloor) {
    b.minimal_constant = (b.lhs - b.rhs_at_zero) / b.c_slope;
  }
  b.admissible = b.minimal_constant && *b.minimal_constant * b.eta < 1.0;
  return b;
}

VarianceInequalityCheck CheckVarianceInequality(
    const Trajectory& trajectory, int player,
    const BoundConstants& constants) {
  const auto& meta = trajectory.metadata;
  for (int i = 0; i < trajectory.num_players(); ++i) {
    if (!FixedStepOptHedge(trajectory, i)) {
      throw std::invalid_argument(
          "variance inequality needs every player on fixed-step OptHedge");
    }
    if (meta.etas[i] != meta.etas[0]) {
      throw std::invalid_argument(
          "variance inequality needs a common step size");
    }
  }
  VarianceInequalityCheck c;
  c.player = player;
  const VarianceSums sums = ComputeVarianceSums(trajectory, player);
  c.lhs = sums.delta;
  c.sum_var_prev = sums.prev;
  c.horizon_exponent = HorizonExponent(trajectory.rounds);
  c.rhs = 0.5 * sums.prev +
          constants.c_prime * std::pow(double(c.horizon_exponent), 5);
  c.holds = c.lhs <= c.rhs;
  if (sums.prev > 0.0) {
    c.ratio = sums.delta / sums.prev;
    c.ratio_status = *c.ratio <= 0.5 ? CheckStatus::kHolds : CheckStatus::kFails;
  } else if (sums.delta > 0.0) {
    c.ratio = std::numeric_limits<double>::infinity();
    c.ratio_status = CheckStatus::kFails;
  }
  return c;
}

nlohmann::json ToJson(const BoundTermBreakdown& b) {
  return {{"player", b.player + 1},
          {"eta", b.eta},
          {"lhs_regret", b.lhs},
          {"term_log", b.term_log},
          {"term_log_base2", b.term_log_base2},
          {"sum_var_delta", b.sum_var_delta},
          {"sum_var_prev", b.sum_var_prev},
          {"rhs_at_zero", b.rhs_at_zero},
          {"c_slope", b.c_slope},
          {"minimal_constant", OptionalJson(b.minimal_constant)},
          {"holds_at_zero", b.holds_at_zero},
          {"admissible", b.admissible}};
}

nlohmann::json ToJson(const VarianceInequalityCheck& c) {
  return {{"player", c.player + 1},
          {"lhs", c.lhs},
          {"rhs", c.rhs},
          {"sum_var_prev", c.sum_var_prev},
          {"horizon_exponent", c.horizon_exponent},
          {"holds", c.holds},
          {"ratio", OptionalJson(c.ratio)},
          {"ratio_status", StatusName(c.ratio_status)}};
}

nlohmann::json ToJson(const ClosenessReport& c) {
  nlohmann::json j = {{"zeta", c.finite ? nlohmann::json(c.zeta)
                                        : nlohmann::json("infinite")},
                      {"finite", c.finite}};
  if (!c.steps.empty()) {
    const ClosenessStep* worst = &c.steps.front();
    for (const auto& s : c.steps) {
      if (s.ratio > worst->ratio) worst = &s;
    }
    j["worst_step"] = worst->step;
    j["worst_coordinate"] = worst->coordinate + 1;
  }
  return j;
}

nlohmann::json ToJson(const FreqCauchyCheck& c) {
  return {{"alpha", c.alpha},
          {"mu", c.mu},
          {"sum_w_sq", c.sum_w_sq},
          {"sum_d1_sq", c.sum_d1_sq},
          {"sum_d2_sq", c.sum_d2_sq},
          {"premise_holds", c.premise_holds},
          {"conclusion_holds", c.conclusion_holds},
          {"premise_slack", c.premise_slack},
          {"conclusion_slack", c.conclusion_slack},
          {"degenerate", c.degenerate}};
}

}  // namespace optdyn
