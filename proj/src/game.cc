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

#include "optdyn/game.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace optdyn {
namespace {

std::string FormatProfile(const Profile& profile) {
  std::ostringstream out;
  out << "(";
  for (size_t k = 0; k < profile.size(); ++k) {
    if (k > 0) out << ",";
    out << profile[k] + 1;
  }
  out << ")";
  return out.str();
}

void CheckStrategies(const Game& game, int player,
                     std::span<const Strategy> strategies) {
  if (player < 0 || player >= game.num_players()) {
    throw std::out_of_range("player index " + std::to_string(player) +
                            " out of range");
  }
  if (static_cast<int>(strategies.size()) != game.num_players()) {
    throw std::invalid_argument(
        "expected one strategy per player: got " +
        std::to_string(strategies.size()) + ", game has " +
        std::to_string(game.num_players()));
  }
  for (int k = 0; k < game.num_players(); ++k) {
    if (k == player) continue;
    if (static_cast<int>(strategies[k].size()) != game.num_actions(k)) {
      throw std::invalid_argument(
          "strategy of player " + std::to_string(k + 1) + " has length " +
          std::to_string(strategies[k].size()) + ", expected " +
          std::to_string(game.num_actions(k)));
    }
  }
}

// Uniform double in [0,1) from the top 53 bits. Unlike
// std::uniform_real_distribution this is identical across standard libraries.
double UnitDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Game TwoPlayerGame(std::string name, int rows, int cols,
                   const std::vector<double>& loss1,
                   const std::vector<double>& loss2) {
  return Game({rows, cols}, {loss1, loss2}, std::move(name));
}

}  // namespace

Game::Game(std::vector<int> action_counts,
           std::vector<std::vector<double>> losses, std::string name)
    : action_counts_(std::move(action_counts)),
      losses_(std::move(losses)),
      name_(std::move(name)) {}

std::int64_t Game::num_profiles() const {
  std::int64_t total = 1;
  for (int n : action_counts_) total *= n;
  return total;
}

std::int64_t Game::FlatIndex(std::span<const int> profile) const {
  std::int64_t index = 0;
  for (size_t k = 0; k < action_counts_.size(); ++k) {
    index = index * action_counts_[k] + profile[k];
  }
  return index;
}

Profile Game::ProfileAt(std::int64_t flat_index) const {
  Profile profile(action_counts_.size());
  for (int k = num_players() - 1; k >= 0; --k) {
    profile[k] = static_cast<int>(flat_index % action_counts_[k]);
    flat_index /= action_counts_[k];
  }
  return profile;
}

ValidationReport Validate(const Game& game) {
  ValidationReport report;
  const int m = game.num_players();
  if (m < 2) {
    report.violations.push_back("game needs at least 2 players, has " +
                                std::to_string(m));
  }
  bool counts_ok = true;
  for (int i = 0; i < m; ++i) {
    if (game.num_actions(i) < 1) {
      counts_ok = false;
      report.violations.push_back("player " + std::to_string(i + 1) +
                                  " has " +
                                  std::to_string(game.num_actions(i)) +
                                  " actions, need at least 1");
    }
  }
  if (static_cast<int>(game.tensors().size()) != m) {
    report.violations.push_back(
        "expected " + std::to_string(m) + " loss tensors, got " +
        std::to_string(game.tensors().size()));
    return report;
  }
  if (!counts_ok) return report;
  const std::int64_t expected = game.num_profiles();
  for (int i = 0; i < m; ++i) {
    const auto& tensor = game.tensor(i);
    if (static_cast<std::int64_t>(tensor.size()) != expected) {
      report.violations.push_back(
          "tensor size mismatch at player " + std::to_string(i + 1) +
          ": expected " + std::to_string(expected) + " entries, got " +
          std::to_string(tensor.size()));
      continue;
    }
    for (std::int64_t k = 0; k < expected; ++k) {
      const double v = tensor[k];
      if (!(v >= 0.0 && v <= 1.0)) {
        report.violations.push_back("loss out of [0,1] at player " +
                                    std::to_string(i + 1) + ", profile " +
                                    FormatProfile(game.ProfileAt(k)));
      }
    }
  }
  return report;
}

double JointActionLoss(const Game& game, int player,
                       std::span<const int> profile) {
  if (player < 0 || player >= game.num_players()) {
    throw std::out_of_range("player index " + std::to_string(player) +
                            " out of range");
  }
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw std::out_of_range("profile has " + std::to_string(profile.size()) +
                            " entries, game has " +
                            std::to_string(game.num_players()) + " players");
  }
  for (int k = 0; k < game.num_players(); ++k) {
    if (profile[k] < 0 || profile[k] >= game.num_actions(k)) {
      throw std::out_of_range("action " + std::to_string(profile[k]) +
                              " of player " + std::to_string(k + 1) +
                              " out of range");
    }
  }
  return game.tensor(player)[game.FlatIndex(profile)];
}

LossVector ExpectedLossVectorByEnumeration(
    const Game& game, int player, std::span<const Strategy> strategies) {
  CheckStrategies(game, player, strategies);
  const int m = game.num_players();
  const auto& counts = game.action_counts();
  const auto& tensor = game.tensor(player);
  LossVector out(counts[player], 0.0);

  // Odometer over a_{-i}; the slot of `player` stays at 0.
  Profile profile(m, 0);
  while (true) {
    double weight = 1.0;
    for (int k = 0; k < m; ++k) {
      if (k != player) weight *= strategies[k][profile[k]];
    }
    if (weight != 0.0) {
      for (int j = 0; j < counts[player]; ++j) {
        profile[player] = j;
        out[j] += weight * tensor[game.FlatIndex(profile)];
      }
      profile[player] = 0;
    }
    int k = m - 1;
    for (; k >= 0; --k) {
      if (k == player) continue;
      if (++profile[k] < counts[k]) break;
      profile[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

LossVector ExpectedLossVectorByContraction(
    const Game& game, int player, std::span<const Strategy> strategies) {
  CheckStrategies(game, player, strategies);
  const int m = game.num_players();
  std::vector<int> shape = game.action_counts();
  std::vector<double> current = game.tensor(player);

  // Contract the trailing axes first, then the leading ones, always in the
  // same player order.
  for (int axis = m - 1; axis >= 0; --axis) {
    if (axis == player) continue;
    std::int64_t outer = 1;
    for (int k = 0; k < axis; ++k) outer *= shape[k];
    std::int64_t inner = 1;
    for (size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
    const int width = shape[axis];
    const Strategy& x = strategies[axis];
    std::vector<double> next(outer * inner, 0.0);
    for (std::int64_t o = 0; o < outer; ++o) {
      for (int a = 0; a < width; ++a) {
        const double w = x[a];
        const double* src = &current[(o * width + a) * inner];
        double* dst = &next[o * inner];
        for (std::int64_t r = 0; r < inner; ++r) dst[r] += w * src[r];
      }
    }
    current = std::move(next);
    shape[axis] = 1;
  }
  return current;
}

LossVector ExpectedLossVector(const Game& game, int player,
                              std::span<const Strategy> strategies) {
  std::int64_t others = 1;
  for (int k = 0; k < game.num_players(); ++k) {
    if (k != player) others *= game.num_actions(k);
  }
  if (others <= kEnumerationLimit) {
    return ExpectedLossVectorByEnumeration(game, player, strategies);
  }
  return ExpectedLossVectorByContraction(game, player, strategies);
}

Game RandomGame(int num_players, const std::vector<int>& action_counts,
                std::uint64_t seed) {
  if (num_players < 2) {
    throw std::invalid_argument("random game needs at least 2 players");
  }
  if (static_cast<int>(action_counts.size()) != num_players) {
    throw std::invalid_argument("action_counts must have one entry per player");
  }
  std::int64_t profiles = 1;
  for (int n : action_counts) {
    if (n < 1) throw std::invalid_argument("every player needs >= 1 action");
    profiles *= n;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> losses(num_players);
  for (auto& tensor : losses) {
    tensor.resize(profiles);
    for (auto& v : tensor) v = UnitDouble(rng);
  }
  return Game(action_counts, std::move(losses),
              "random_seed_" + std::to_string(seed));
}

std::vector<std::string> NamedGameList() {
  return {"matching_pennies", "rock_paper_scissors", "coordination_2x2",
          "prisoners_dilemma_rescaled"};
}

Game NamedGame(std::string_view name) {
  if (name == "matching_pennies") {
    // Player 1 loses when the coins match.
    return TwoPlayerGame("matching_pennies", 2, 2, {1, 0, 0, 1},
                         {0, 1, 1, 0});
  }
  if (name == "rock_paper_scissors") {
    // Actions: rock, paper, scissors. Win 0, tie 0.5, loss 1.
    std::vector<double> l1(9), l2(9);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double v = 0.5;
        if ((a - b + 3) % 3 == 1) v = 0.0;
        if ((b - a + 3) % 3 == 1) v = 1.0;
        l1[a * 3 + b] = v;
        l2[a * 3 + b] = 1.0 - v;
      }
    }
    return TwoPlayerGame("rock_paper_scissors", 3, 3, l1, l2);
  }
  if (name == "coordination_2x2") {
    // Payoffs (2,2) on (A,A), (1,1) on (B,B), 0 otherwise; loss = 1 - u/2.
    return TwoPlayerGame("coordination_2x2", 2, 2, {0, 1, 1, 0.5},
                         {0, 1, 1, 0.5});
  }
  if (name == "prisoners_dilemma_rescaled") {
    // Actions: cooperate, defect. Payoffs R=3, S=0, T=5, P=1; loss =
    // (5 - u)/5.
    return TwoPlayerGame("prisoners_dilemma_rescaled", 2, 2,
                         {0.4, 1.0, 0.0, 0.8}, {0.4, 0.0, 1.0, 0.8});
  }
  throw std::invalid_argument("unknown game name '" + std::string(name) + "'");
}

nlohmann::json GameToJson(const Game& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  j["losses"] = game.tensors();
  if (!game.name().empty()) j["name"] = game.name();
  return j;
}

Game GameFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("game: expected an object");
  for (const char* key : {"players", "actions", "losses"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("game: missing field '") + key +
                                  "'");
    }
  }
  if (!j["players"].is_number_integer()) {
    throw std::invalid_argument("game.players: expected an integer");
  }
  const int m = j["players"].get<int>();
  if (!j["actions"].is_array()) {
    throw std::invalid_argument("game.actions: expected an array");
  }
  std::vector<int> counts;
  for (size_t k = 0; k < j["actions"].size(); ++k) {
    const auto& v = j["actions"][k];
    if (!v.is_number_integer()) {
      throw std::invalid_argument("game.actions[" + std::to_string(k) +
                                  "]: expected an integer");
    }
    counts.push_back(v.get<int>());
  }
  if (static_cast<int>(counts.size()) != m) {
    throw std::invalid_argument("game.actions: expected " + std::to_string(m) +
                                " entries, got " +
                                std::to_string(counts.size()));
  }
  if (!j["losses"].is_array()) {
    throw std::invalid_argument("game.losses: expected an array");
  }
  std::vector<std::vector<double>> losses;
  for (size_t i = 0; i < j["losses"].size(); ++i) {
    const auto& row = j["losses"][i];
    if (!row.is_array()) {
      throw std::invalid_argument("game.losses[" + std::to_string(i) +
                                  "]: expected an array");
    }
    std::vector<double> tensor;
    tensor.reserve(row.size());
    for (size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number()) {
        throw std::invalid_argument("game.losses[" + std::to_string(i) + "][" +
                                    std::to_string(k) +
                                    "]: expected a number");
      }
      tensor.push_back(row[k].get<double>());
    }
    losses.push_back(std::move(tensor));
  }
  std::string name;
  if (j.contains("name") && j["name"].is_string()) {
    name = j["name"].get<std::string>();
  }
  Game game(std::move(counts), std::move(losses), std::move(name));
  const ValidationReport report = Validate(game);
  if (!report.ok()) {
    std::string message = "invalid game:";
    for (const auto& v : report.violations) message += "\n  " + v;
    throw std::invalid_argument(message);
  }
  return game;
}

}  // namespace optdyn
