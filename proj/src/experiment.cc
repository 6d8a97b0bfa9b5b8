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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "optdyn/diagnostics.h"
#include "optdyn/finite_difference.h"
#include "optdyn/format.h"

namespace optdyn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::int64_t kTrajectoryRowLimit = 10000000;

std::string ShortNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double ParseNumber(const std::string& text, const std::string& field) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": '" + text + "' is not a number");
  }
}

std::int64_t ParseInteger(const std::string& text, const std::string& field) {
  try {
    size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": '" + text + "' is not an integer");
  }
}

EtaPolicy ParseEtaPolicy(const std::string& name, const std::string& field) {
  if (name == "theorem") return EtaPolicy::kTheorem;
  if (name == "practical") return EtaPolicy::kPractical;
  if (name == "explicit") return EtaPolicy::kExplicit;
  throw ConfigError(field + ": unknown eta policy '" + name +
                    "' (expected theorem, practical or explicit)");
}

LearnerMode ParseModeField(const std::string& name, const std::string& field) {
  try {
    return ParseMode(name);
  } catch (const std::invalid_argument&) {
    throw ConfigError(field + ": unknown learner mode '" + name +
                      "' (expected hedge, opt_hedge or adaptive_opt_hedge)");
  }
}

// "3x3" -> {3, 3}.
std::vector<int> ParseActionCounts(const std::string& text,
                                   const std::string& field) {
  std::vector<int> counts;
  for (const auto& part : Split(text, 'x')) {
    counts.push_back(static_cast<int>(ParseInteger(part, field)));
  }
  return counts;
}

// Fixture name, "random:AxB[:seed]", or a path to a game JSON file.
GameSource ParseGameFlag(const std::string& value,
                         std::optional<std::uint64_t> seed) {
  GameSource source;
  if (value.rfind("random:", 0) == 0) {
    const auto parts = Split(value.substr(7), ':');
    if (parts.empty() || parts.size() > 2) {
      throw ConfigError("game: expected random:AxB[:seed], got '" + value +
                        "'");
    }
    source.kind = GameSource::Kind::kRandom;
    source.action_counts = ParseActionCounts(parts[0], "game");
    source.num_players = static_cast<int>(source.action_counts.size());
    if (parts.size() == 2) {
      source.seed = static_cast<std::uint64_t>(ParseInteger(parts[1], "game"));
    } else {
      source.seed = seed.value_or(0);
    }
    return source;
  }
  const auto names = NamedGameList();
  if (std::find(names.begin(), names.end(), value) != names.end()) {
    source.kind = GameSource::Kind::kNamed;
    source.name = value;
    return source;
  }
  if (value.find('/') != std::string::npos || value.ends_with(".json") ||
      fs::exists(value)) {
    source.kind = GameSource::Kind::kFile;
    source.name = value;
    return source;
  }
  throw ConfigError("game: unknown game '" + value + "'");
}

// "mode[:eta=X][:policy=P]".
LearnerSpec ParseLearnerFlag(const std::string& value, size_t index) {
  const std::string field = "learner[" + std::to_string(index) + "]";
  const auto parts = Split(value, ':');
  LearnerSpec spec;
  spec.mode = ParseModeField(parts.at(0), field + ".mode");
  for (size_t k = 1; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string::npos) {
      throw ConfigError(field + ": expected key=value, got '" + parts[k] + "'");
    }
    const std::string key = parts[k].substr(0, eq);
    const std::string v = parts[k].substr(eq + 1);
    if (key == "eta") {
      spec.eta_policy = EtaPolicy::kExplicit;
      spec.eta = ParseNumber(v, field + ".eta");
    } else if (key == "policy") {
      spec.eta_policy = ParseEtaPolicy(v, field + ".eta_policy");
    } else {
      throw ConfigError(field + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

DiagnosticsToggles ParseDiagnosticsFlag(const std::string& value) {
  if (value == "all") return DiagnosticsToggles::All();
  DiagnosticsToggles t;
  if (value == "none" || value.empty()) return t;
  for (const auto& item : Split(value, ',')) {
    if (item == "bound_terms") {
      t.bound_terms = true;
    } else if (item == "variance_inequality") {
      t.variance_inequality = true;
    } else if (item == "closeness") {
      t.closeness = true;
    } else if (item == "fd_profile") {
      t.fd_profile_h_max = 5;
    } else if (item.rfind("fd_profile=", 0) == 0) {
      t.fd_profile_h_max =
          static_cast<int>(ParseInteger(item.substr(11), "diagnostics"));
    } else {
      throw ConfigError("diagnostics: unknown check '" + item + "'");
    }
  }
  return t;
}

void ParseFormats(const std::vector<std::string>& items,
                  ExperimentConfig& config, const std::string& field) {
  config.write_json = false;
  config.write_csv = false;
  for (const auto& f : items) {
    if (f == "json") {
      config.write_json = true;
    } else if (f == "csv") {
      config.write_csv = true;
    } else {
      throw ConfigError(field + ": unknown format '" + f + "'");
    }
  }
}

void CheckKeys(const json& j, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ConfigError(path + "." + key + ": unknown field");
    }
  }
}

template <typename T>
T Get(const json& j, const char* key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type or missing");
  }
}

json GameSourceToJson(const GameSource& g) {
  switch (g.kind) {
    case GameSource::Kind::kNamed:
      return {{"named", g.name}};
    case GameSource::Kind::kFile:
      return {{"file", g.name}};
    case GameSource::Kind::kRandom:
      return {{"random",
               {{"players", g.num_players},
                {"actions", g.action_counts},
                {"seed", g.seed}}}};
  }
  return nullptr;
}

GameSource GameSourceFromJson(const json& j) {
  CheckKeys(j, "game", {"named", "file", "random"});
  if (j.size() != 1) {
    throw ConfigError("game: exactly one of named, file, random is required");
  }
  GameSource g;
  if (j.contains("named")) {
    g.kind = GameSource::Kind::kNamed;
    g.name = Get<std::string>(j, "named", "game");
  } else if (j.contains("file")) {
    g.kind = GameSource::Kind::kFile;
    g.name = Get<std::string>(j, "file", "game");
  } else {
    const json& r = j.at("random");
    CheckKeys(r, "game.random", {"players", "actions", "seed"});
    g.kind = GameSource::Kind::kRandom;
    g.action_counts = Get<std::vector<int>>(r, "actions", "game.random");
    g.num_players = r.contains("players")
                        ? Get<int>(r, "players", "game.random")
                        : static_cast<int>(g.action_counts.size());
    g.seed = r.contains("seed") ? Get<std::uint64_t>(r, "seed", "game.random")
                                : 0;
  }
  return g;
}

json LearnerSpecToJson(const LearnerSpec& s) {
  json j = {{"mode", ModeName(s.mode)}, {"eta_policy", EtaPolicyName(s.eta_policy)}};
  if (s.eta_policy == EtaPolicy::kExplicit) j["eta"] = s.eta;
  return j;
}

LearnerSpec LearnerSpecFromJson(const json& j, const std::string& path) {
  CheckKeys(j, path, {"mode", "eta_policy", "eta"});
  LearnerSpec s;
  if (j.contains("mode")) {
    s.mode = ParseModeField(Get<std::string>(j, "mode", path), path + ".mode");
  }
  if (j.contains("eta_policy")) {
    s.eta_policy = ParseEtaPolicy(Get<std::string>(j, "eta_policy", path),
                                  path + ".eta_policy");
  }
  if (j.contains("eta")) {
    s.eta = Get<double>(j, "eta", path);
    if (!j.contains("eta_policy")) s.eta_policy = EtaPolicy::kExplicit;
  }
  return s;
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

json CceToJson(const CceGap& gap) {
  return {{"epsilon", gap.epsilon},
          {"raw_max", gap.raw_max},
          {"raw_gaps", gap.raw_gaps}};
}

json VerdictSummary(const json& diagnostics) {
  json v = json::object();
  if (diagnostics.contains("bound_terms")) {
    json items = json::array();
    for (const auto& b : diagnostics["bound_terms"]) {
      if (b.contains("skipped")) {
        items.push_back({{"player", b["player"]}, {"verdict", "skipped"}});
      } else {
        items.push_back(
            {{"player", b["player"]},
             {"verdict", b["minimal_constant"].is_null() ? "no_finite_constant"
                                                         : "finite_constant"},
             {"minimal_constant", b["minimal_constant"]}});
      }
    }
    v["bound_terms"] = items;
  }
  if (diagnostics.contains("variance_inequality")) {
    const json& d = diagnostics["variance_inequality"];
    if (d.is_object() && d.contains("skipped")) {
      v["variance_inequality"] = "skipped";
    } else {
      json items = json::array();
      for (const auto& c : d) {
        items.push_back({{"player", c["player"]},
                         {"holds", c["holds"]},
                         {"ratio_status", c["ratio_status"]}});
      }
      v["variance_inequality"] = items;
    }
  }
  if (diagnostics.contains("closeness")) {
    json items = json::array();
    for (const auto& c : diagnostics["closeness"]) {
      items.push_back({{"player", c["player"]},
                       {"within_bound", c.value("within_bound", json())}});
    }
    v["closeness"] = items;
  }
  if (diagnostics.contains("fd_profile")) v["fd_profile"] = "reported";
  return v;
}

RunSummary RunBatch(const ExperimentConfig& config,
                    std::chrono::steady_clock::time_point start) {
  if (config.game.kind != GameSource::Kind::kRandom) {
    throw ConfigError("batch: needs a random game source");
  }
  BatchSpec spec;
  spec.num_players = config.game.num_players;
  spec.action_counts = config.game.action_counts;
  spec.rounds = config.rounds;
  spec.configs =
      ResolveLearners(config.learners, spec.num_players, config.rounds);
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < *config.batch; ++k) seeds.push_back(config.game.seed + k);
  const auto entries = BatchRun(spec, seeds, WorkersFromEnvironment());

  RunSummary summary;
  json batch = json::array();
  std::ostringstream csv;
  csv << "seed,player,regret,best_action\n";
  for (const auto& e : entries) {
    batch.push_back({{"seed", e.seed},
                     {"regrets", e.regrets},
                     {"max_regret", e.max_regret}});
    for (size_t i = 0; i < e.regrets.size(); ++i) {
      csv << e.seed << ',' << i + 1 << ',' << FormatDouble(e.regrets[i]) << ','
          << e.best_actions[i] + 1 << '\n';
    }
  }
  summary.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  summary.json = {{"config", ConfigToJson(config)},
                  {"version", kVersionTag},
                  {"batch", batch},
                  {"duration_seconds", summary.duration_seconds}};
  fs::create_directories(config.out_dir);
  if (config.write_json) {
    WriteFile(fs::path(config.out_dir) / "summary.json",
              summary.json.dump(2) + "\n");
  }
  if (config.write_csv) {
    WriteFile(fs::path(config.out_dir) / "batch_summary.csv", csv.str());
  }
  return summary;
}

}  // namespace

const char* EtaPolicyName(EtaPolicy policy) {
  switch (policy) {
    case EtaPolicy::kTheorem:
      return "theorem";
    case EtaPolicy::kPractical:
      return "practical";
    case EtaPolicy::kExplicit:
      return "explicit";
  }
  return "unknown";
}

DiagnosticsToggles DiagnosticsToggles::All() {
  DiagnosticsToggles t;
  t.bound_terms = true;
  t.variance_inequality = true;
  t.closeness = true;
  t.fd_profile_h_max = 5;
  return t;
}

nlohmann::json ConfigToJson(const ExperimentConfig& config) {
  json learners = json::array();
  for (const auto& s : config.learners) learners.push_back(LearnerSpecToJson(s));
  json diagnostics = {{"bound_terms", config.diagnostics.bound_terms},
                      {"variance_inequality",
                       config.diagnostics.variance_inequality},
                      {"closeness", config.diagnostics.closeness}};
  if (config.diagnostics.fd_profile_h_max) {
    diagnostics["fd_profile_h_max"] = *config.diagnostics.fd_profile_h_max;
  }
  json formats = json::array();
  if (config.write_json) formats.push_back("json");
  if (config.write_csv) formats.push_back("csv");
  json j = {{"game", GameSourceToJson(config.game)},
            {"learners", learners},
            {"rounds", config.rounds},
            {"seed", config.seed},
            {"diagnostics", diagnostics},
            {"out", config.out_dir},
            {"formats", formats},
            {"force_trajectory", config.force_trajectory}};
  if (config.batch) j["batch"] = *config.batch;
  return j;
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  CheckKeys(j, "config",
            {"game", "learners", "rounds", "seed", "diagnostics", "out",
             "formats", "force_trajectory", "batch"});
  ExperimentConfig c;
  if (j.contains("game")) c.game = GameSourceFromJson(j["game"]);
  if (j.contains("learners")) {
    if (!j["learners"].is_array()) {
      throw ConfigError("config.learners: expected an array");
    }
    c.learners.clear();
    for (size_t k = 0; k < j["learners"].size(); ++k) {
      c.learners.push_back(LearnerSpecFromJson(
          j["learners"][k], "learners[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("rounds")) c.rounds = Get<std::int64_t>(j, "rounds", "config");
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j, "seed", "config");
  if (j.contains("diagnostics")) {
    const json& d = j["diagnostics"];
    CheckKeys(d, "diagnostics",
              {"bound_terms", "variance_inequality", "closeness",
               "fd_profile_h_max"});
    c.diagnostics.bound_terms = d.value("bound_terms", false);
    c.diagnostics.variance_inequality = d.value("variance_inequality", false);
    c.diagnostics.closeness = d.value("closeness", false);
    if (d.contains("fd_profile_h_max")) {
      c.diagnostics.fd_profile_h_max =
          Get<int>(d, "fd_profile_h_max", "diagnostics");
    }
  }
  if (j.contains("out")) c.out_dir = Get<std::string>(j, "out", "config");
  if (j.contains("formats")) {
    ParseFormats(Get<std::vector<std::string>>(j, "formats", "config"), c,
                 "config.formats");
  }
  if (j.contains("force_trajectory")) {
    c.force_trajectory = Get<bool>(j, "force_trajectory", "config");
  }
  if (j.contains("batch")) c.batch = Get<int>(j, "batch", "config");
  return c;
}

void ValidateConfig(const ExperimentConfig& config) {
  if (config.rounds < 1) {
    throw ConfigError("rounds: must be >= 1, got " +
                      std::to_string(config.rounds));
  }
  if (config.learners.empty()) {
    throw ConfigError("learners: at least one learner is required");
  }
  for (size_t k = 0; k < config.learners.size(); ++k) {
    const auto& s = config.learners[k];
    if (s.eta_policy == EtaPolicy::kExplicit &&
        (!(s.eta > 0.0) || !std::isfinite(s.eta))) {
      throw ConfigError("learners[" + std::to_string(k) +
                        "].eta: must be > 0, got " + ShortNumber(s.eta));
    }
  }
  const GameSource& g = config.game;
  switch (g.kind) {
    case GameSource::Kind::kNamed: {
      const auto names = NamedGameList();
      if (std::find(names.begin(), names.end(), g.name) == names.end()) {
        throw ConfigError("game.named: unknown game '" + g.name + "'");
      }
      break;
    }
    case GameSource::Kind::kFile:
      if (g.name.empty()) throw ConfigError("game.file: empty path");
      break;
    case GameSource::Kind::kRandom:
      if (g.num_players < 2) {
        throw ConfigError("game.random.players: must be >= 2");
      }
      if (static_cast<int>(g.action_counts.size()) != g.num_players) {
        throw ConfigError("game.random.actions: expected " +
                          std::to_string(g.num_players) + " entries");
      }
      for (int n : g.action_counts) {
        if (n < 1) throw ConfigError("game.random.actions: entries must be >= 1");
      }
      break;
  }
  if (config.diagnostics.fd_profile_h_max &&
      *config.diagnostics.fd_profile_h_max < 0) {
    throw ConfigError("diagnostics.fd_profile_h_max: must be >= 0");
  }
  if (config.batch && *config.batch < 1) {
    throw ConfigError("batch: must be >= 1");
  }
  if (!config.write_json && !config.write_csv) {
    throw ConfigError("formats: at least one of json, csv is required");
  }
}

ExperimentConfig ParseConfig(const ConfigFlags& flags) {
  ExperimentConfig config;
  if (flags.config_path) {
    std::ifstream in(*flags.config_path);
    if (!in) throw ConfigError("config: cannot open " + *flags.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config: " + std::string(e.what()));
    }
    config = ConfigFromJson(j);
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.game) config.game = ParseGameFlag(*flags.game, flags.seed);
  if (flags.rounds) config.rounds = *flags.rounds;
  if (!flags.learners.empty()) {
    config.learners.clear();
    for (size_t k = 0; k < flags.learners.size(); ++k) {
      config.learners.push_back(ParseLearnerFlag(flags.learners[k], k));
    }
  }
  if (flags.eta_policy) {
    const EtaPolicy p = ParseEtaPolicy(*flags.eta_policy, "eta_policy");
    for (auto& s : config.learners) s.eta_policy = p;
  }
  if (flags.eta) {
    if (!(*flags.eta > 0.0) || !std::isfinite(*flags.eta)) {
      throw ConfigError("eta: must be > 0, got " + ShortNumber(*flags.eta));
    }
    if (flags.eta_policy && *flags.eta_policy != "explicit") {
      throw ConfigError("eta: conflicts with --eta-policy " +
                        *flags.eta_policy);
    }
    for (auto& s : config.learners) {
      s.eta_policy = EtaPolicy::kExplicit;
      s.eta = *flags.eta;
    }
  }
  if (flags.diagnostics) {
    config.diagnostics = ParseDiagnosticsFlag(*flags.diagnostics);
  }
  if (flags.format) ParseFormats(Split(*flags.format, ','), config, "format");
  if (flags.out) config.out_dir = *flags.out;
  if (flags.force_trajectory) config.force_trajectory = true;
  if (flags.batch) config.batch = *flags.batch;
  ValidateConfig(config);
  return config;
}

Game LoadGame(const GameSource& source) {
  switch (source.kind) {
    case GameSource::Kind::kNamed:
      try {
        return NamedGame(source.name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("game.named: ") + e.what());
      }
    case GameSource::Kind::kRandom:
      try {
        return RandomGame(source.num_players, source.action_counts,
                          source.seed);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("game.random: ") + e.what());
      }
    case GameSource::Kind::kFile: {
      std::ifstream in(source.name);
      if (!in) throw ConfigError("game.file: cannot open " + source.name);
      try {
        json j;
        in >> j;
        return GameFromJson(j);
      } catch (const std::exception& e) {
        throw ConfigError("game.file: " + std::string(e.what()));
      }
    }
  }
  throw ConfigError("game: no source");
}

double ResolveEta(const LearnerSpec& spec, int num_players,
                  std::int64_t rounds) {
  switch (spec.eta_policy) {
    case EtaPolicy::kTheorem:
      return TheoremEta(num_players, rounds);
    case EtaPolicy::kPractical:
      return PracticalEta(num_players, rounds);
    case EtaPolicy::kExplicit:
      return spec.eta;
  }
  return spec.eta;
}

std::vector<LearnerConfig> ResolveLearners(
    const std::vector<LearnerSpec>& specs, int num_players,
    std::int64_t rounds) {
  if (specs.size() != 1 && static_cast<int>(specs.size()) != num_players) {
    throw ConfigError("learners: expected 1 or " +
                      std::to_string(num_players) + " entries, got " +
                      std::to_string(specs.size()));
  }
  std::vector<LearnerConfig> out;
  for (int i = 0; i < num_players; ++i) {
    const LearnerSpec& s = specs.size() == 1 ? specs[0] : specs[i];
    LearnerConfig c;
    c.mode = s.mode;
    c.eta = ResolveEta(s, num_players, rounds);
    out.push_back(c);
  }
  return out;
}

nlohmann::json RunDiagnostics(const Trajectory& trajectory,
                              const DiagnosticsToggles& toggles) {
  json out = json::object();
  const int m = trajectory.num_players();
  if (toggles.bound_terms) {
    json items = json::array();
    for (int i = 0; i < m; ++i) {
      try {
        items.push_back(ToJson(BoundTermsOptHedge(trajectory, i)));
      } catch (const std::invalid_argument& e) {
        items.push_back({{"player", i + 1}, {"skipped", e.what()}});
      }
    }
    out["bound_terms"] = items;
  }
  if (toggles.variance_inequality) {
    try {
      json items = json::array();
      for (int i = 0; i < m; ++i) {
        items.push_back(ToJson(CheckVarianceInequality(trajectory, i)));
      }
      out["variance_inequality"] = items;
    } catch (const std::invalid_argument& e) {
      out["variance_inequality"] = {{"skipped", e.what()}};
    }
  }
  if (toggles.closeness) {
    json items = json::array();
    for (int i = 0; i < m; ++i) {
      const ClosenessReport report = ConsecutiveCloseness(trajectory, i);
      json j = ToJson(report);
      j["player"] = i + 1;
      const LearnerMode mode = trajectory.metadata.modes[i];
      if (mode == LearnerMode::kOptHedge) {
        const double bound = std::exp(6.0 * trajectory.metadata.etas[i]) - 1.0;
        j["bound"] = bound;
        j["within_bound"] = report.finite && report.zeta <= bound;
      }
      items.push_back(j);
    }
    out["closeness"] = items;
  }
  if (toggles.fd_profile_h_max) {
    const int h_max = static_cast<int>(std::min<std::int64_t>(
        *toggles.fd_profile_h_max, trajectory.rounds - 1));
    json items = json::array();
    for (int i = 0; i < m; ++i) {
      VectorSequence losses;
      for (const auto& round : trajectory.losses) losses.push_back(round[i]);
      const FiniteDifferenceProfile p = FdDecayProfile(losses, h_max);
      json ratios = json::array();
      for (const auto& r : p.ratios) {
        ratios.push_back(r ? json(*r) : json(nullptr));
      }
      items.push_back({{"player", i + 1},
                       {"h_max", h_max},
                       {"sup_norms", p.sup_norms},
                       {"ratios", ratios}});
    }
    out["fd_profile"] = items;
  }
  return out;
}

RunSummary RunExperiment(const ExperimentConfig& config) {
  ValidateConfig(config);
  const auto start = std::chrono::steady_clock::now();
  if (config.batch) return RunBatch(config, start);

  const Game game = LoadGame(config.game);
  const auto learners =
      ResolveLearners(config.learners, game.num_players(), config.rounds);
  const Trajectory traj = Run(game, learners, config.rounds, config.seed);

  RunSummary summary;
  json players = json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    summary.regrets.push_back(Regret(traj, i));
    const RegretReport& r = summary.regrets.back();
    players.push_back({{"player", i + 1},
                       {"mode", ModeName(learners[i].mode)},
                       {"eta", learners[i].eta},
                       {"regret", r.total_regret},
                       {"best_action", r.best_action + 1},
                       {"cumulative_loss", r.cumulative_loss},
                       {"best_fixed_loss", r.best_fixed_loss}});
  }
  json cce = nullptr;
  if (game.num_profiles() <= kDenseSupportLimit) {
    summary.cce = ComputeCceGap(game, EmpiricalJointDistribution(traj));
    cce = CceToJson(summary.cce);
  } else {
    summary.warnings.push_back("cce gap skipped: joint action space too large");
  }
  json diagnostics = json::object();
  if (config.diagnostics.any()) {
    diagnostics = RunDiagnostics(traj, config.diagnostics);
  }

  std::int64_t actions_total = 0;
  for (int n : game.action_counts()) actions_total += n;
  const bool write_trajectory =
      config.force_trajectory ||
      config.rounds * actions_total <= kTrajectoryRowLimit;
  if (config.write_csv && !write_trajectory) {
    summary.warnings.push_back(
        "trajectory.csv skipped: more than 1e7 rows (use --force-trajectory)");
  }

  summary.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  summary.json = {{"config", ConfigToJson(config)},
                  {"version", kVersionTag},
                  {"game",
                   {{"name", game.name()},
                    {"players", game.num_players()},
                    {"actions", game.action_counts()}}},
                  {"rounds", config.rounds},
                  {"players", players},
                  {"cce", cce},
                  {"diagnostics", VerdictSummary(diagnostics)},
                  {"warnings", summary.warnings},
                  {"duration_seconds", summary.duration_seconds}};

  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string());
  if (config.write_json) {
    WriteFile(dir / "summary.json", summary.json.dump(2) + "\n");
    json reports = json::array();
    for (const auto& r : summary.regrets) {
      reports.push_back(RegretReportToJson(r));
    }
    WriteFile(dir / "regret.json", reports.dump() + "\n");
    if (config.diagnostics.any()) {
      WriteFile(dir / "diagnostics.json", diagnostics.dump(2) + "\n");
    }
  }
  if (config.write_csv) {
    std::ostringstream curve;
    WriteRegretCurveCsv(summary.regrets, curve);
    WriteFile(dir / "regret_curve.csv", curve.str());
    if (write_trajectory) {
      std::ostringstream csv;
      WriteTrajectoryCsv(traj, csv);
      WriteFile(dir / "trajectory.csv", csv.str());
    }
    if (config.diagnostics.fd_profile_h_max) {
      const int h_max = static_cast<int>(std::min<std::int64_t>(
          *config.diagnostics.fd_profile_h_max, traj.rounds - 1));
      for (int i = 0; i < game.num_players(); ++i) {
        VectorSequence losses;
        for (const auto& round : traj.losses) losses.push_back(round[i]);
        const FiniteDifferenceProfile p = FdDecayProfile(losses, h_max);
        const std::string suffix = "_p" + std::to_string(i + 1) + ".csv";
        std::ostringstream values, sups;
        WriteFdProfileCsv(p, values);
        WriteFdSupNormCsv(p, sups);
        WriteFile(dir / ("fd_profile" + suffix), values.str());
        WriteFile(dir / ("fd_sup_norms" + suffix), sups.str());
      }
    }
  }
  return summary;
}

std::vector<ComparisonRow> CompareLearners(const ExperimentConfig& config) {
  ValidateConfig(config);
  if (config.learners.size() < 2) {
    throw ConfigError("learners: compare needs at least 2 learner specs, got " +
                      std::to_string(config.learners.size()));
  }
  const Game game = LoadGame(config.game);
  const int m = game.num_players();
  const std::int64_t t = config.rounds;
  const std::int64_t checkpoints[] = {std::max<std::int64_t>(1, t / 4),
                                      std::max<std::int64_t>(1, t / 2), t};
  std::vector<ComparisonRow> rows;
  for (size_t k = 0; k < config.learners.size(); ++k) {
    const LearnerSpec& spec = config.learners[k];
    const auto learners = ResolveLearners({spec}, m, t);
    const Trajectory traj = Run(game, learners, t, config.seed);
    std::vector<RegretReport> reports;
    for (int i = 0; i < m; ++i) reports.push_back(Regret(traj, i));
    for (std::int64_t c : checkpoints) {
      for (int i = 0; i < m; ++i) {
        rows.push_back({static_cast<int>(k), spec.mode, learners[i].eta, c, i,
                        reports[i].regret_curve[c - 1]});
      }
    }
  }
  return rows;
}

std::vector<ComparisonRow> RunComparison(const ExperimentConfig& config) {
  std::vector<ComparisonRow> rows = CompareLearners(config);
  std::ostringstream csv;
  csv << "learner,mode,eta,round,player,regret\n";
  for (const auto& r : rows) {
    csv << r.learner + 1 << ',' << ModeName(r.mode) << ','
        << FormatDouble(r.eta) << ',' << r.round << ',' << r.player + 1 << ','
        << FormatDouble(r.regret) << '\n';
  }
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  WriteFile(dir / "comparison.csv", csv.str());
  return rows;
}

unsigned WorkersFromEnvironment() {
  const char* value = std::getenv("OPTDYN_WORKERS");
  if (value == nullptr) return 0;
  try {
    const long parsed = std::stol(value);
    return parsed > 0 ? static_cast<unsigned>(parsed) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace optdyn
