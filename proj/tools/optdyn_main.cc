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

// optdyn: no-regret learning dynamics in normal-form games.
//
//   optdyn run      --game matching_pennies --rounds 1024 --out out/
//   optdyn compare  --game random:2x2:3 --rounds 16384 \
//                   --learner hedge:eta=0.0078125 --learner opt_hedge:eta=0.05
//   optdyn diagnose --game random:3x3:9 --rounds 4096 --eta 0.05
//   optdyn gen-game --game random:2x3x2 --seed 1 --out game.json
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "optdyn/experiment.h"
#include "optdyn/game.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void AddCommonFlags(CLI::App* cmd, optdyn::ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config");
  cmd->add_option("--game", flags.game,
                  "Fixture name, random:AxB[:seed], or game JSON path");
  cmd->add_option("--rounds,-T", flags.rounds, "Number of rounds T");
  cmd->add_option("--eta", flags.eta, "Explicit step size for every learner");
  cmd->add_option("--eta-policy", flags.eta_policy,
                  "theorem | practical | explicit");
  cmd->add_option("--learner", flags.learners,
                  "mode[:eta=X][:policy=P]; repeat for per-player or "
                  "compared learners");
  cmd->add_option("--seed", flags.seed, "Run seed (also seeds random games)");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--format", flags.format, "Comma list of json,csv");
}

void PrintSummary(const optdyn::RunSummary& summary) {
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
  if (summary.json.contains("players")) {
    for (const auto& p : summary.json["players"]) {
      std::cout << "player " << p["player"] << " (" << p["mode"].get<std::string>()
                << ", eta=" << p["eta"] << "): regret " << p["regret"]
                << ", best action " << p["best_action"] << "\n";
    }
    if (!summary.json["cce"].is_null()) {
      std::cout << "cce gap: " << summary.json["cce"]["epsilon"] << "\n";
    }
  } else if (summary.json.contains("batch")) {
    std::cout << summary.json["batch"].size() << " runs\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-regret learning dynamics in normal-form games"};
  app.require_subcommand(1);

  optdyn::ConfigFlags flags;

  CLI::App* run = app.add_subcommand("run", "Simulate self-play and report");
  AddCommonFlags(run, flags);
  run->add_option("--diagnostics", flags.diagnostics,
                  "all | none | bound_terms,variance_inequality,closeness,"
                  "fd_profile[=H]");
  run->add_flag("--force-trajectory", flags.force_trajectory,
                "Write trajectory.csv even when it is very large");
  run->add_option("--batch", flags.batch,
                  "Run K random games with seeds seed..seed+K-1");

  CLI::App* compare =
      app.add_subcommand("compare", "Compare learners on one game");
  AddCommonFlags(compare, flags);

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Run with every diagnostic enabled");
  AddCommonFlags(diagnose, flags);
  diagnose->add_option("--diagnostics", flags.diagnostics,
                       "Override the default 'all'");

  CLI::App* gen = app.add_subcommand("gen-game", "Write a game as JSON");
  std::string gen_game;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--game", gen_game, "Fixture name or random:AxB[:seed]")
      ->required();
  gen->add_option("--seed", gen_seed, "Seed for random games");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      optdyn::ConfigFlags g;
      g.game = gen_game;
      g.seed = gen_seed;
      g.rounds = 1;
      const optdyn::ExperimentConfig config = optdyn::ParseConfig(g);
      const std::string text =
          optdyn::GameToJson(optdyn::LoadGame(config.game)).dump() + "\n";
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        if (!(out << text)) {
          std::cerr << "error: cannot write " << gen_out << "\n";
          return kExitRuntime;
        }
      }
      return kExitOk;
    }
    if (diagnose->parsed() && !flags.diagnostics) flags.diagnostics = "all";
    const optdyn::ExperimentConfig config = optdyn::ParseConfig(flags);
    if (compare->parsed()) {
      const auto rows = optdyn::RunComparison(config);
      for (const auto& r : rows) {
        if (r.round != config.rounds) continue;
        std::cout << "learner " << r.learner + 1 << " ("
                  << optdyn::ModeName(r.mode) << ", eta=" << r.eta
                  << ") player " << r.player + 1 << ": regret " << r.regret
                  << "\n";
      }
      return kExitOk;
    }
    PrintSummary(optdyn::RunExperiment(config));
    return kExitOk;
  } catch (const optdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
