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

#ifndef OPTDYN_DYNAMICS_H_
#define OPTDYN_DYNAMICS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "optdyn/game.h"
#include "optdyn/learners.h"

namespace optdyn {

inline constexpr char kVersionTag[] = "optdyn-1.0.0";

struct LearnerConfig {
  LearnerMode mode = LearnerMode::kOptHedge;
  double eta = 0.05;
  // Adaptive mode only; the horizon is filled in by Run().
  double c_prime = BoundConstants{}.c_prime;
  bool switch_test_enabled = true;

  friend bool operator==(const LearnerConfig&,
                         const LearnerConfig&) = default;
};

struct TrajectoryMetadata {
  std::vector<LearnerMode> modes;
  std::vector<double> etas;  // initial step sizes
  // Round at which each adaptive learner switched step size, if it did.
  std::vector<std::optional<std::int64_t>> switch_rounds;
  std::uint64_t seed = 0;
  std::string version = kVersionTag;
};

// Full record of a run. Rounds are 0-indexed here: strategies[t] is x^{t+1}
// in 1-indexed notation.
struct Trajectory {
  Game game;
  std::int64_t rounds = 0;
  std::vector<std::vector<Strategy>> strategies;  // [t][player]
  std::vector<std::vector<LossVector>> losses;    // [t][player]
  TrajectoryMetadata metadata;

  int num_players() const { return game.num_players(); }
  // l_i^{t} with the l_i^0 = 0 convention; t is 1-indexed here.
  LossVector LossOrZero(std::int64_t t, int player) const;
};

// Synchronous full-information self-play. Each round all loss vectors are
// computed from the current strategies before any learner advances. The
// dynamics are deterministic; `seed` is recorded in the metadata only.
// Throws std::invalid_argument on rounds < 1 or a config count that is
// neither 1 (shared by all players) nor m.
Trajectory Run(const Game& game, const std::vector<LearnerConfig>& configs,
               std::int64_t rounds, std::uint64_t seed = 0);

struct RegretReport {
  int player = 0;
  double total_regret = 0.0;
  int best_action = 0;  // 0-indexed, lowest index on ties
  double cumulative_loss = 0.0;
  double best_fixed_loss = 0.0;
  std::vector<double> regret_curve;  // Reg(t) for t = 1..T
};

RegretReport Regret(const Trajectory& trajectory, int player);

// Time-averaged product distribution over joint profiles, dense.
struct EmpiricalPlay {
  std::vector<int> action_counts;
  std::vector<double> probs;  // row-major, same layout as Game tensors
};

inline constexpr std::int64_t kDenseSupportLimit = 1000000;

// Throws std::length_error when prod n_i > kDenseSupportLimit.
EmpiricalPlay EmpiricalJointDistribution(const Trajectory& trajectory);

struct CceGap {
  double epsilon = 0.0;              // max_i max(raw_gaps[i], 0)
  double raw_max = 0.0;              // max_i raw_gaps[i]
  std::vector<double> raw_gaps;      // on-path loss - best deviation loss
  std::vector<int> best_deviations;  // 0-indexed, lowest index on ties
};

CceGap ComputeCceGap(const Game& game, const EmpiricalPlay& play);

// Running sums only, for horizons too long to store.
struct StreamingSummary {
  std::int64_t rounds = 0;
  std::vector<double> cumulative_loss;                  // per player
  std::vector<std::vector<double>> action_loss_totals;  // [player][action]
  std::vector<double> regrets;
  std::vector<int> best_actions;
  std::vector<Strategy> final_strategies;
};

StreamingSummary RunStreaming(const Game& game,
                              const std::vector<LearnerConfig>& configs,
                              std::int64_t rounds);

struct BatchSpec {
  int num_players = 2;
  std::vector<int> action_counts = {2, 2};
  std::vector<LearnerConfig> configs = {LearnerConfig{}};
  std::int64_t rounds = 1;
};

struct BatchEntry {
  std::uint64_t seed = 0;
  std::vector<double> regrets;
  std::vector<int> best_actions;
  double max_regret = 0.0;

  friend bool operator==(const BatchEntry&, const BatchEntry&) = default;
};

// One RandomGame per seed, each run independently on up to `workers`
// threads (0 = hardware concurrency). Output is in the order of `seeds`.
std::vector<BatchEntry> BatchRun(const BatchSpec& spec,
                                 const std::vector<std::uint64_t>& seeds,
                                 unsigned workers = 0);

// CSV: round,player,kind,action,value with 1-indexed round/player/action.
void WriteTrajectoryCsv(const Trajectory& trajectory, std::ostream& out);
// CSV: round,player,regret.
void WriteRegretCurveCsv(const std::vector<RegretReport>& reports,
                         std::ostream& out);
// {"player", "regret", "best_action", "curve"} with 1-indexed player/action.
nlohmann::json RegretReportToJson(const RegretReport& report);

}  // namespace optdyn

#endif  // OPTDYN_DYNAMICS_H_
