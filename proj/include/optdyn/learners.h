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

#ifndef OPTDYN_LEARNERS_H_
#define OPTDYN_LEARNERS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "optdyn/game.h"

namespace optdyn {

enum class LearnerMode { kHedge, kOptHedge, kAdaptiveOptHedge };

// "hedge", "opt_hedge", "adaptive_opt_hedge".
std::string_view ModeName(LearnerMode mode);
// Throws std::invalid_argument on an unknown name.
LearnerMode ParseMode(std::string_view name);

// Constants from the polylog-regret analysis. Both are lower bounds coming
// out of the proofs, not tuned values.
struct BoundConstants {
  double c_thm = 14794752.0;  // C in eta = 1 / (C m log^4 T)
  double c_prime = 165262.0;  // C' in the O(log^5 T) variance slack
};

// H = ceil(log2 T), clamped to at least 1.
int HorizonExponent(std::int64_t horizon);

// Settings only read in adaptive mode.
struct AdaptiveOptions {
  std::int64_t horizon = 0;  // T; must be >= 1 in adaptive mode
  double c_prime = BoundConstants{}.c_prime;
  // Off: the learner behaves exactly like OptHedge. Test hook.
  bool switch_test_enabled = true;
};

struct LearnerState {
  Strategy strategy;    // x^t
  LossVector prev_loss;  // l^{t-1}; all zeros at t = 1
  double eta = 0.0;
  LearnerMode mode = LearnerMode::kOptHedge;
  std::int64_t round = 1;

  // Adaptive bookkeeping.
  AdaptiveOptions adaptive;
  bool switched = false;
  std::optional<std::int64_t> switch_round;
  double var_delta_sum = 0.0;  // sum_t Var_{x^t}[l^t - l^{t-1}]
  double var_prev_sum = 0.0;   // sum_t Var_{x^t}[l^{t-1}]
  double eta_post = 0.0;       // sqrt(ln n / T)

  int num_actions() const { return static_cast<int>(strategy.size()); }
};

// Uniform strategy, zero previous loss, round 1. Throws std::invalid_argument
// if n < 1, eta <= 0 (or non-finite), or adaptive mode without a horizon.
LearnerState InitState(int num_actions, double eta, LearnerMode mode,
                       const AdaptiveOptions& adaptive = {});

// x^{t+1}(j) ∝ x^t(j) exp(-eta l^t(j)).
LearnerState HedgeStep(const LearnerState& state, std::span<const double> loss);

// x^{t+1}(j) ∝ x^t(j) exp(-eta (2 l^t(j) - l^{t-1}(j))).
LearnerState OptHedgeStep(const LearnerState& state,
                          std::span<const double> loss);

// x~^t(j) ∝ x^t(j) exp(-eta (l^t(j) - l^{t-1}(j))). Read-only.
Strategy IntermediateIterate(const LearnerState& state,
                             std::span<const double> loss);

// Accumulates both variance sums at the current iterate, runs the switch
// test (rounds >= 4 only), then takes an OptHedge step with the possibly
// updated step size. Requires mode == kAdaptiveOptHedge.
LearnerState AdaptiveOptHedgeStep(const LearnerState& state,
                                  std::span<const double> loss);

// Dispatches on state.mode.
LearnerState Step(const LearnerState& state, std::span<const double> loss);

// Theorem-compliant step size 1 / (C m (log2 T)^4). Tiny at any practical
// horizon (about 5e-13 for m = 2, T = 2^16).
double TheoremEta(int num_players, std::int64_t horizon,
                  const BoundConstants& constants = {});
// NOT theorem-compliant: min(0.1, 1 / (m (log2 T)^2)). Gives visible
// dynamics at desk scale. log2 T is clamped to at least 1.
double PracticalEta(int num_players, std::int64_t horizon);

// exp-weights update x(j) ∝ x(j) exp(-eta g(j)) with the maximum exponent
// over the support subtracted first.
Strategy ExponentialWeights(std::span<const double> x, double eta,
                            std::span<const double> g);

}  // namespace optdyn

#endif  // OPTDYN_LEARNERS_H_
