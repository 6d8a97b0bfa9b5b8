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

#include "optdyn/dynamics.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "optdyn/format.h"

namespace optdyn {
namespace {

std::vector<LearnerState> InitLearners(const Game& game,
                                       const std::vector<LearnerConfig>& configs,
                                       std::int64_t rounds) {
  const int m = game.num_players();
  if (configs.size() != 1 && static_cast<int>(configs.size()) != m) {
    throw std::invalid_argument("expected 1 or " + std::to_string(m) +
                                " learner configs, got " +
                                std::to_string(configs.size()));
  }
  std::vector<LearnerState> learners;
  learners.reserve(m);
  for (int i = 0; i < m; ++i) {
    const LearnerConfig& c = configs.size() == 1 ? configs[0] : configs[i];
    AdaptiveOptions adaptive;
    adaptive.horizon = rounds;
    adaptive.c_prime = c.c_prime;
    adaptive.switch_test_enabled = c.switch_test_enabled;
    learners.push_back(InitState(game.num_actions(i), c.eta, c.mode, adaptive));
  }
  return learners;
}

std::vector<Strategy> CurrentStrategies(
    const std::vector<LearnerState>& learners) {
  std::vector<Strategy> out;
  out.reserve(learners.size());
  for (const auto& l : learners) out.push_back(l.strategy);
  return out;
}

// Calls fn(flat_index, product_probability) for every joint profile.
template <typename Fn>
void ForEachProductWeight(const std::vector<int>& counts,
                          const std::vector<Strategy>& strategies, Fn fn) {
  const int m = static_cast<int>(counts.size());
  // prefix[k] = prod_{k' < k} x_{k'}(a_{k'}) for the current odometer state.
  std::vector<double> prefix(m + 1, 1.0);
  Profile profile(m, 0);
  for (int k = 0; k < m; ++k) prefix[k + 1] = prefix[k] * strategies[k][0];
  std::int64_t flat = 0;
  while (true) {
    fn(flat, prefix[m]);
    ++flat;
    int k = m - 1;
    for (; k >= 0; --k) {
      if (++profile[k] < counts[k]) break;
      profile[k] = 0;
    }
    if (k < 0) break;
    for (int r = k; r < m; ++r) {
      prefix[r + 1] = prefix[r] * strategies[r][profile[r]];
    }
  }
}

// Running regret against every fixed action. Accumulating the per-round
// differences <x, l> - l(j) keeps the error independent of the loss scale,
// which the difference of two long running sums does not.
struct RegretAccumulator {
  explicit RegretAccumulator(int n) : per_action(n, 0.0), totals(n, 0.0) {}

  void Add(std::span<const double> x, std::span<const double> loss) {
    double on_path = 0.0;
    for (size_t j = 0; j < loss.size(); ++j) on_path += x[j] * loss[j];
    cumulative += on_path;
    for (size_t j = 0; j < loss.size(); ++j) {
      per_action[j] += on_path - loss[j];
      totals[j] += loss[j];
    }
  }
  // Lowest index on ties.
  int Best() const {
    return static_cast<int>(
        std::max_element(per_action.begin(), per_action.end()) -
        per_action.begin());
  }
  double Value() const { return per_action[Best()]; }

  std::vector<double> per_action;
  std::vector<double> totals;
  double cumulative = 0.0;
};

}  // namespace

LossVector Trajectory::LossOrZero(std::int64_t t, int player) const {
  if (t <= 0) return LossVector(game.num_actions(player), 0.0);
  return losses[t - 1][player];
}

Trajectory Run(const Game& game, const std::vector<LearnerConfig>& configs,
               std::int64_t rounds, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  const ValidationReport report = Validate(game);
  if (!report.ok()) {
    throw std::invalid_argument("invalid game: " + report.violations.front());
  }
  std::vector<LearnerState> learners = InitLearners(game, configs, rounds);
  const int m = game.num_players();

  Trajectory traj;
  traj.game = game;
  traj.rounds = rounds;
  traj.strategies.reserve(rounds);
  traj.losses.reserve(rounds);
  traj.metadata.seed = seed;
  for (const auto& l : learners) {
    traj.metadata.modes.push_back(l.mode);
    traj.metadata.etas.push_back(l.eta);
  }

  for (std::int64_t t = 0; t < rounds; ++t) {
    std::vector<Strategy> current = CurrentStrategies(learners);
    std::vector<LossVector> losses;
    losses.reserve(m);
    for (int i = 0; i < m; ++i) {
      losses.push_back(ExpectedLossVector(game, i, current));
    }
    for (int i = 0; i < m; ++i) learners[i] = Step(learners[i], losses[i]);
    traj.strategies.push_back(std::move(current));
    traj.losses.push_back(std::move(losses));
  }
  for (const auto& l : learners) {
    traj.metadata.switch_rounds.push_back(l.switch_round);
  }
  return traj;
}

RegretReport Regret(const Trajectory& trajectory, int player) {
  RegretReport report;
  report.player = player;
  report.regret_curve.reserve(trajectory.rounds);
  RegretAccumulator acc(trajectory.game.num_actions(player));
  for (std::int64_t t = 0; t < trajectory.rounds; ++t) {
    acc.Add(trajectory.strategies[t][player], trajectory.losses[t][player]);
    report.regret_curve.push_back(acc.Value());
  }
  report.best_action = acc.Best();
  report.cumulative_loss = acc.cumulative;
  report.best_fixed_loss = acc.totals[report.best_action];
  report.total_regret = acc.Value();
  return report;
}

EmpiricalPlay EmpiricalJointDistribution(const Trajectory& trajectory) {
  const Game& game = trajectory.game;
  if (game.num_profiles() > kDenseSupportLimit) {
    throw std::length_error("joint action space has " +
                            std::to_string(game.num_profiles()) +
                            " profiles, dense limit is " +
                            std::to_string(kDenseSupportLimit));
  }
  EmpiricalPlay play;
  play.action_counts = game.action_counts();
  play.probs.assign(game.num_profiles(), 0.0);
  for (std::int64_t t = 0; t < trajectory.rounds; ++t) {
    ForEachProductWeight(play.action_counts, trajectory.strategies[t],
                         [&](std::int64_t k, double w) { play.probs[k] += w; });
  }
  const double scale = 1.0 / static_cast<double>(trajectory.rounds);
  for (double& p : play.probs) p *= scale;
  return play;
}

CceGap ComputeCceGap(const Game& game, const EmpiricalPlay& play) {
  const int m = game.num_players();
  CceGap gap;
  gap.raw_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const int n = game.num_actions(i);
    const auto& tensor = game.tensor(i);
    double on_path = 0.0;
    std::vector<double> deviation(n, 0.0);
    for (std::int64_t k = 0; k < game.num_profiles(); ++k) {
      const double p = play.probs[k];
      if (p == 0.0) continue;
      on_path += p * tensor[k];
      Profile profile = game.ProfileAt(k);
      for (int j = 0; j < n; ++j) {
        profile[i] = j;
        deviation[j] += p * tensor[game.FlatIndex(profile)];
      }
    }
    const auto best = std::min_element(deviation.begin(), deviation.end());
    const double raw = on_path - *best;
    gap.raw_gaps.push_back(raw);
    gap.best_deviations.push_back(static_cast<int>(best - deviation.begin()));
    gap.raw_max = std::max(gap.raw_max, raw);
    gap.epsilon = std::max(gap.epsilon, std::max(raw, 0.0));
  }
  return gap;
}

StreamingSummary RunStreaming(const Game& game,
                              const std::vector<LearnerConfig>& configs,
                              std::int64_t rounds) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  std::vector<LearnerState> learners = InitLearners(game, configs, rounds);
  const int m = game.num_players();
  std::vector<RegretAccumulator> acc;
  for (int i = 0; i < m; ++i) acc.emplace_back(game.num_actions(i));
  for (std::int64_t t = 0; t < rounds; ++t) {
    const std::vector<Strategy> current = CurrentStrategies(learners);
    std::vector<LossVector> losses;
    losses.reserve(m);
    for (int i = 0; i < m; ++i) {
      losses.push_back(ExpectedLossVector(game, i, current));
    }
    for (int i = 0; i < m; ++i) {
      acc[i].Add(current[i], losses[i]);
      learners[i] = Step(learners[i], losses[i]);
    }
  }
  StreamingSummary summary;
  summary.rounds = rounds;
  for (int i = 0; i < m; ++i) {
    summary.cumulative_loss.push_back(acc[i].cumulative);
    summary.action_loss_totals.push_back(acc[i].totals);
    summary.best_actions.push_back(acc[i].Best());
    summary.regrets.push_back(acc[i].Value());
    summary.final_strategies.push_back(learners[i].strategy);
  }
  return summary;
}

std::vector<BatchEntry> BatchRun(const BatchSpec& spec,
                                 const std::vector<std::uint64_t>& seeds,
                                 unsigned workers) {
  if (seeds.empty()) throw std::invalid_argument("batch needs >= 1 seed");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, seeds.size());

  std::vector<BatchEntry> results(seeds.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t k = next++; k < seeds.size(); k = next++) {
      try {
        const Game game =
            RandomGame(spec.num_players, spec.action_counts, seeds[k]);
        const StreamingSummary s = RunStreaming(game, spec.configs, spec.rounds);
        BatchEntry& e = results[k];
        e.seed = seeds[k];
        e.regrets = s.regrets;
        e.best_actions = s.best_actions;
        e.max_regret = *std::max_element(s.regrets.begin(), s.regrets.end());
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

void WriteTrajectoryCsv(const Trajectory& trajectory, std::ostream& out) {
  out << "round,player,kind,action,value\n";
  for (std::int64_t t = 0; t < trajectory.rounds; ++t) {
    for (int i = 0; i < trajectory.num_players(); ++i) {
      const Strategy& x = trajectory.strategies[t][i];
      for (size_t j = 0; j < x.size(); ++j) {
        out << t + 1 << ',' << i + 1 << ",strategy," << j + 1 << ','
            << FormatDouble(x[j]) << '\n';
      }
      const LossVector& l = trajectory.losses[t][i];
      for (size_t j = 0; j < l.size(); ++j) {
        out << t + 1 << ',' << i + 1 << ",loss," << j + 1 << ','
            << FormatDouble(l[j]) << '\n';
      }
    }
  }
}

void WriteRegretCurveCsv(const std::vector<RegretReport>& reports,
                         std::ostream& out) {
  out << "round,player,regret\n";
  for (const auto& r : reports) {
    for (size_t t = 0; t < r.regret_curve.size(); ++t) {
      out << t + 1 << ',' << r.player + 1 << ','
          << FormatDouble(r.regret_curve[t]) << '\n';
    }
  }
}

nlohmann::json RegretReportToJson(const RegretReport& report) {
  return {{"player", report.player + 1},
          {"regret", report.total_regret},
          {"best_action", report.best_action + 1},
          {"cumulative_loss", report.cumulative_loss},
          {"best_fixed_loss", report.best_fixed_loss},
          {"curve", report.regret_curve}};
}

}  // namespace optdyn
