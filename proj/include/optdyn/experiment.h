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

// Experiment configuration and orchestration behind the `optdyn` CLI.
//
// Configuration comes from three layers with precedence
// flags > config file > defaults. A config file looks like
//
//   {
//     "game": {"named": "matching_pennies"},
//     "learners": [{"mode": "opt_hedge", "eta_policy": "practical"}],
//     "rounds": 1024,
//     "seed": 0,
//     "diagnostics": {"bound_terms": true, "fd_profile_h_max": 5},
//     "out": "out",
//     "formats": ["json", "csv"]
//   }
//
// where "game" is one of {"named": name}, {"file": path} or
// {"random": {"players": m, "actions": [...], "seed": s}}.

#ifndef OPTDYN_EXPERIMENT_H_
#define OPTDYN_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "optdyn/dynamics.h"
#include "optdyn/game.h"
#include "optdyn/learners.h"

namespace optdyn {

// Invalid configuration. The message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EtaPolicy { kTheorem, kPractical, kExplicit };
const char* EtaPolicyName(EtaPolicy policy);

struct GameSource {
  enum class Kind { kNamed, kFile, kRandom };
  Kind kind = Kind::kNamed;
  std::string name;  // fixture name or file path
  int num_players = 2;
  std::vector<int> action_counts;
  std::uint64_t seed = 0;

  friend bool operator==(const GameSource&, const GameSource&) = default;
};

struct LearnerSpec {
  LearnerMode mode = LearnerMode::kOptHedge;
  EtaPolicy eta_policy = EtaPolicy::kPractical;
  double eta = 0.0;  // used only with kExplicit

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

struct DiagnosticsToggles {
  bool bound_terms = false;
  bool variance_inequality = false;
  bool closeness = false;
  std::optional<int> fd_profile_h_max;

  bool any() const {
    return bound_terms || variance_inequality || closeness ||
           fd_profile_h_max.has_value();
  }
  static DiagnosticsToggles All();

  friend bool operator==(const DiagnosticsToggles&,
                         const DiagnosticsToggles&) = default;
};

struct ExperimentConfig {
  GameSource game;
  // One spec shared by every player, or one per player. For `compare`, the
  // list of learners to compare, each applied to every player.
  std::vector<LearnerSpec> learners = {LearnerSpec{}};
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  DiagnosticsToggles diagnostics;
  std::string out_dir = "out";
  bool write_json = true;
  bool write_csv = true;
  bool force_trajectory = false;
  // Run this many random games (seeds seed..seed+K-1) instead of one.
  std::optional<int> batch;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Command-line values; unset fields fall through to the file or defaults.
struct ConfigFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> game;  // name, "random:AxB[:seed]" or path
  std::optional<std::int64_t> rounds;
  std::optional<double> eta;
  std::optional<std::string> eta_policy;
  std::vector<std::string> learners;  // "mode[:eta=X][:policy=P]"
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> diagnostics;  // "all", "none" or a list
  std::optional<std::string> format;       // "json,csv"
  bool force_trajectory = false;
  std::optional<int> batch;
};

// Merges file and flags over the defaults and validates the result. Throws
// ConfigError.
ExperimentConfig ParseConfig(const ConfigFlags& flags);
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const ExperimentConfig& config);
void ValidateConfig(const ExperimentConfig& config);

Game LoadGame(const GameSource& source);
// Per-player learner configs; `specs` has 1 or m entries.
std::vector<LearnerConfig> ResolveLearners(
    const std::vector<LearnerSpec>& specs, int num_players,
    std::int64_t rounds);
double ResolveEta(const LearnerSpec& spec, int num_players,
                  std::int64_t rounds);

struct RunSummary {
  nlohmann::json json;  // what summary.json contains
  std::vector<RegretReport> regrets;
  CceGap cce;
  double duration_seconds = 0.0;
  std::vector<std::string> warnings;
};

// Runs one experiment and writes its artifacts under config.out_dir:
// summary.json, regret.json, diagnostics.json (json format);
// regret_curve.csv, trajectory.csv, fd_profile.csv, fd_sup_norms.csv (csv
// format). With config.batch set, writes batch_summary.csv/json instead.
RunSummary RunExperiment(const ExperimentConfig& config);

// Diagnostics report for a finished run, keyed by check name.
nlohmann::json RunDiagnostics(const Trajectory& trajectory,
                              const DiagnosticsToggles& toggles);

struct ComparisonRow {
  int learner = 0;  // index into config.learners
  LearnerMode mode = LearnerMode::kOptHedge;
  double eta = 0.0;
  std::int64_t round = 0;
  int player = 0;  // 0-indexed
  double regret = 0.0;
};

// Checkpoints T/4, T/2 and T (clamped to >= 1), same game for every learner.
// Throws ConfigError with fewer than two learners.
std::vector<ComparisonRow> CompareLearners(const ExperimentConfig& config);
// Also writes comparison.csv under config.out_dir.
std::vector<ComparisonRow> RunComparison(const ExperimentConfig& config);

// Worker count for batch runs from OPTDYN_WORKERS; 0 means "all cores".
unsigned WorkersFromEnvironment();

}  // namespace optdyn

#endif  // OPTDYN_EXPERIMENT_H_
