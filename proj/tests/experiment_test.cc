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

#include "optdyn/experiment.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "optdyn/diagnostics.h"

namespace optdyn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("optdyn_test_" + std::string(info->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static std::vector<std::vector<std::string>> ReadCsv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(ExperimentTest, MinimalFlagsUseDefaults) {
  ConfigFlags f;
  f.game = "matching_pennies";
  f.rounds = 1000;
  const ExperimentConfig c = ParseConfig(f);
  EXPECT_EQ(c.game.kind, GameSource::Kind::kNamed);
  ASSERT_EQ(c.learners.size(), 1u);
  EXPECT_EQ(c.learners[0].mode, LearnerMode::kOptHedge);
  EXPECT_EQ(c.learners[0].eta_policy, EtaPolicy::kPractical);
  const auto resolved = ResolveLearners(c.learners, 2, c.rounds);
  ASSERT_EQ(resolved.size(), 2u);
  EXPECT_DOUBLE_EQ(resolved[0].eta, PracticalEta(2, 1000));
}

TEST_F(ExperimentTest, NegativeEtaIsConfigError) {
  ConfigFlags f;
  f.game = "matching_pennies";
  f.rounds = 10;
  f.eta = -0.1;
  try {
    ParseConfig(f);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "eta: must be > 0, got -0.1");
  }
}

TEST_F(ExperimentTest, OtherConfigErrors) {
  ConfigFlags f;
  f.game = "matching_pennies";
  EXPECT_THROW(ParseConfig(f), ConfigError);  // rounds missing
  f.rounds = 10;
  f.learners = {"ftrl"};
  EXPECT_THROW(ParseConfig(f), ConfigError);
  f.learners = {"hedge:eta=abc"};
  EXPECT_THROW(ParseConfig(f), ConfigError);
  f.learners = {};
  f.game = "random:2x";
  EXPECT_THROW(ParseConfig(f), ConfigError);
  EXPECT_THROW(ConfigFromJson(json::parse(R"({"rounds": 5, "bogus": 1})")),
               ConfigError);
}

TEST_F(ExperimentTest, ConfigRoundTrip) {
  ConfigFlags f;
  f.game = "random:2x3:5";
  f.rounds = 64;
  f.learners = {"hedge:eta=0.2", "adaptive_opt_hedge:policy=theorem"};
  f.diagnostics = "bound_terms,fd_profile=3";
  f.format = "json";
  const ExperimentConfig c = ParseConfig(f);
  const json j = ConfigToJson(c);
  const ExperimentConfig back = ConfigFromJson(j);
  EXPECT_EQ(back, c);
  EXPECT_EQ(ConfigToJson(back), j);
}

TEST_F(ExperimentTest, ConfigFileLayersUnderFlags) {
  const fs::path file = dir_ / "config.json";
  std::ofstream(file) << R"({"game": {"named": "rock_paper_scissors"},
                            "rounds": 50, "seed": 3})";
  ConfigFlags f;
  f.config_path = file.string();
  f.rounds = 70;
  const ExperimentConfig c = ParseConfig(f);
  EXPECT_EQ(c.game.name, "rock_paper_scissors");
  EXPECT_EQ(c.rounds, 70);
  EXPECT_EQ(c.seed, 3u);
}

ExperimentConfig MatchingPennies(const fs::path& out, std::int64_t rounds) {
  ExperimentConfig c;
  c.game.name = "matching_pennies";
  c.rounds = rounds;
  c.out_dir = out.string();
  return c;
}

TEST_F(ExperimentTest, RegretCurveRowCount) {
  RunExperiment(MatchingPennies(dir_, 1024));
  const auto rows = ReadCsv(dir_ / "regret_curve.csv");
  EXPECT_EQ(rows.size(), 1u + 2 * 1024);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"round", "player", "regret"}));
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
  EXPECT_TRUE(fs::exists(dir_ / "regret.json"));
  EXPECT_TRUE(fs::exists(dir_ / "trajectory.csv"));
}

TEST_F(ExperimentTest, SummaryIsDeterministic) {
  const ExperimentConfig c = MatchingPennies(dir_, 500);
  RunExperiment(c);
  json a = json::parse(Slurp(dir_ / "summary.json"));
  RunExperiment(c);
  json b = json::parse(Slurp(dir_ / "summary.json"));
  a.erase("duration_seconds");
  b.erase("duration_seconds");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(ExperimentTest, DiagnosticsOnRandomGame) {
  ExperimentConfig c;
  c.game.kind = GameSource::Kind::kRandom;
  c.game.num_players = 2;
  c.game.action_counts = {3, 3};
  c.game.seed = 9;
  c.rounds = 2048;
  c.learners = {LearnerSpec{LearnerMode::kOptHedge, EtaPolicy::kExplicit, 0.05}};
  c.diagnostics = DiagnosticsToggles::All();
  c.out_dir = dir_.string();
  RunExperiment(c);
  const json d = json::parse(Slurp(dir_ / "diagnostics.json"));
  ASSERT_EQ(d["bound_terms"].size(), 2u);
  const Trajectory t = optdyn::Run(RandomGame(2, {3, 3}, 9),
                           {LearnerConfig{LearnerMode::kOptHedge, 0.05}}, 2048);
  for (int i = 0; i < 2; ++i) {
    const json& b = d["bound_terms"][i];
    ASSERT_TRUE(b["minimal_constant"].is_number());
    EXPECT_TRUE(std::isfinite(b["minimal_constant"].get<double>()));
    const BoundTermBreakdown want = BoundTermsOptHedge(t, i);
    EXPECT_NEAR(b["sum_var_delta"].get<double>(), want.sum_var_delta, 1e-12);
    EXPECT_NEAR(b["lhs_regret"].get<double>(), want.lhs, 1e-12);
  }
  EXPECT_TRUE(d.contains("variance_inequality"));
  EXPECT_TRUE(d.contains("closeness"));
  EXPECT_TRUE(d.contains("fd_profile"));
}

TEST_F(ExperimentTest, CsvRegretRecomputable) {
  ExperimentConfig c = MatchingPennies(dir_, 300);
  c.game.kind = GameSource::Kind::kRandom;
  c.game.action_counts = {2, 3};
  c.game.seed = 4;
  RunExperiment(c);
  // round,player,kind,action,value
  std::map<std::pair<int, int>, std::map<int, double>> strat, loss;
  const auto rows = ReadCsv(dir_ / "trajectory.csv");
  for (size_t k = 1; k < rows.size(); ++k) {
    const int t = std::stoi(rows[k][0]), i = std::stoi(rows[k][1]),
              a = std::stoi(rows[k][3]);
    auto& target = rows[k][2] == "strategy" ? strat : loss;
    target[{t, i}][a] = std::stod(rows[k][4]);
  }
  std::map<int, double> final_regret;
  for (const auto& row : ReadCsv(dir_ / "regret_curve.csv")) {
    if (row[0] == "300") final_regret[std::stoi(row[1])] = std::stod(row[2]);
  }
  for (int i = 1; i <= 2; ++i) {
    double on_path = 0;
    std::map<int, double> fixed;
    for (int t = 1; t <= 300; ++t) {
      for (const auto& [a, l] : loss[{t, i}]) {
        on_path += strat[{t, i}][a] * l;
        fixed[a] += l;
      }
    }
    double best = INFINITY;
    for (const auto& [a, v] : fixed) best = std::min(best, v);
    EXPECT_NEAR(on_path - best, final_regret[i], 1e-9);
  }
}

TEST_F(ExperimentTest, CompareNeedsTwoLearners) {
  ExperimentConfig c = MatchingPennies(dir_, 64);
  EXPECT_THROW(CompareLearners(c), ConfigError);
}

TEST_F(ExperimentTest, CompareCheckpoints) {
  ExperimentConfig c = MatchingPennies(dir_, 1 << 12);
  c.learners = {LearnerSpec{LearnerMode::kHedge, EtaPolicy::kExplicit, 1.0 / 64},
                LearnerSpec{LearnerMode::kOptHedge, EtaPolicy::kExplicit, 0.05}};
  const auto rows = RunComparison(c);
  ASSERT_EQ(rows.size(), 2u * 3 * 2);
  std::set<std::int64_t> rounds;
  for (const auto& r : rows) {
    rounds.insert(r.round);
    // Symmetric matching pennies starts at its equilibrium.
    EXPECT_EQ(r.regret, 0.0);
  }
  EXPECT_EQ(rounds, (std::set<std::int64_t>{1024, 2048, 4096}));
  EXPECT_EQ(ReadCsv(dir_ / "comparison.csv").size(), 1u + rows.size());
}

TEST_F(ExperimentTest, CompareOptimisticWinsOnAsymmetricPennies) {
  const fs::path game = dir_ / "amp.json";
  std::ofstream(game) << GameToJson(Game({2, 2}, {{1, 0, 0, 0.5}, {0, 1, 1, 0.5}}))
                      << "\n";
  ExperimentConfig c = MatchingPennies(dir_, 1 << 14);
  c.game.kind = GameSource::Kind::kFile;
  c.game.name = game.string();
  c.learners = {LearnerSpec{LearnerMode::kHedge, EtaPolicy::kExplicit, 1.0 / 128},
                LearnerSpec{LearnerMode::kOptHedge, EtaPolicy::kExplicit, 0.05}};
  double hedge = 0, opt = 0;
  for (const auto& r : CompareLearners(c)) {
    if (r.round != c.rounds) continue;
    (r.learner == 0 ? hedge : opt) = std::max(r.learner == 0 ? hedge : opt, r.regret);
  }
  EXPECT_LT(opt, hedge);
}

TEST_F(ExperimentTest, BatchWritesSummary) {
  ExperimentConfig c;
  c.game.kind = GameSource::Kind::kRandom;
  c.game.action_counts = {2, 2};
  c.rounds = 128;
  c.batch = 4;
  c.seed = 10;
  c.out_dir = dir_.string();
  const RunSummary s = RunExperiment(c);
  EXPECT_EQ(s.json["batch"].size(), 4u);
  // One row per seed and player.
  EXPECT_EQ(ReadCsv(dir_ / "batch_summary.csv").size(), 1u + 4 * 2);
}

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(OPTDYN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(ExperimentTest, CliExitCodes) {
  const std::string out = " --out " + (dir_ / "cli").string();
  EXPECT_EQ(RunCli("run --game matching_pennies --rounds 64" + out), 0);
  EXPECT_TRUE(fs::exists(dir_ / "cli" / "summary.json"));
  EXPECT_EQ(RunCli("run --game matching_pennies --rounds 64 --eta -0.1" + out), 2);
  EXPECT_EQ(RunCli("run --game nope --rounds 64" + out), 2);
  EXPECT_EQ(RunCli("run --bogus-flag"), 2);
  EXPECT_EQ(RunCli("compare --game matching_pennies --rounds 64" + out), 2);
  EXPECT_EQ(RunCli("gen-game --game random:2x3 --seed 3 --out " +
                   (dir_ / "g.json").string()),
            0);
  const Game g = GameFromJson(json::parse(Slurp(dir_ / "g.json")));
  EXPECT_EQ(g, RandomGame(2, {2, 3}, 3));
  EXPECT_EQ(RunCli("diagnose --game " + (dir_ / "g.json").string() +
                   " --rounds 128 --eta 0.05" + out),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "cli" / "diagnostics.json"));
}

}  // namespace
}  // namespace optdyn
