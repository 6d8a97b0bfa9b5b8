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

#ifndef OPTDYN_GAME_H_
#define OPTDYN_GAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace optdyn {

// A probability vector over one player's actions.
using Strategy = std::vector<double>;
// Expected loss of each action of one player in one round.
using LossVector = std::vector<double>;
// Joint action profile, 0-indexed internally.
using Profile = std::vector<int>;

// Normal-form game with m players and per-player loss tensors over joint
// action profiles. Tensors are dense and row-major over (a_1, ..., a_m), so
// the last player's action varies fastest.
//
// A Game may hold data that violates the invariants (losses outside [0,1],
// wrong tensor size); use Validate() to inspect it. The factories below
// (RandomGame, NamedGame, GameFromJson) only ever return valid games.
class Game {
 public:
  Game() = default;
  Game(std::vector<int> action_counts, std::vector<std::vector<double>> losses,
       std::string name = "");

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int player) const { return action_counts_.at(player); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  const std::vector<double>& tensor(int player) const {
    return losses_.at(player);
  }
  const std::vector<std::vector<double>>& tensors() const { return losses_; }
  const std::string& name() const { return name_; }

  // Number of joint action profiles, prod_i n_i.
  std::int64_t num_profiles() const;
  // Row-major offset of a (validated) profile.
  std::int64_t FlatIndex(std::span<const int> profile) const;
  // Inverse of FlatIndex.
  Profile ProfileAt(std::int64_t flat_index) const;

  friend bool operator==(const Game&, const Game&) = default;

 private:
  std::vector<int> action_counts_;
  std::vector<std::vector<double>> losses_;
  std::string name_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every Game invariant. Violations name players and profiles
// 1-indexed, e.g. "loss out of [0,1] at player 1, profile (1,2)".
ValidationReport Validate(const Game& game);

// Loss of `player` at a 0-indexed joint profile. Throws std::out_of_range on
// an invalid player or action.
double JointActionLoss(const Game& game, int player,
                       std::span<const int> profile);

// l_i(j) = E_{a_{-i} ~ x_{-i}}[L_i(j, a_{-i})]. `strategies` holds one entry
// per player; the entry of `player` itself is ignored. Dispatches to the
// enumeration path when prod_{i' != i} n_{i'} <= kEnumerationLimit and to
// the contraction path otherwise. Throws std::invalid_argument on dimension
// mismatch.
LossVector ExpectedLossVector(const Game& game, int player,
                              std::span<const Strategy> strategies);

inline constexpr std::int64_t kEnumerationLimit = 100000;

// The two evaluation routes, exposed so they can be checked against each
// other.
LossVector ExpectedLossVectorByEnumeration(
    const Game& game, int player, std::span<const Strategy> strategies);
LossVector ExpectedLossVectorByContraction(
    const Game& game, int player, std::span<const Strategy> strategies);

// Game with i.i.d. uniform [0,1] losses. Identical seeds give bit-identical
// games on every platform. Throws std::invalid_argument if m < 2, if
// action_counts.size() != m, or if any n_i < 1.
Game RandomGame(int num_players, const std::vector<int>& action_counts,
                std::uint64_t seed);

// One of "matching_pennies", "rock_paper_scissors", "coordination_2x2",
// "prisoners_dilemma_rescaled". Throws std::invalid_argument otherwise.
Game NamedGame(std::string_view name);
std::vector<std::string> NamedGameList();

// {"players": m, "actions": [...], "losses": [[...], ...], "name": "..."}.
// GameFromJson throws std::invalid_argument listing every violation.
nlohmann::json GameToJson(const Game& game);
Game GameFromJson(const nlohmann::json& j);

}  // namespace optdyn

#endif  // OPTDYN_GAME_H_
