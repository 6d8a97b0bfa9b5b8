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

#include "optdyn/learners.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "optdyn/divergences.h"

namespace optdyn {
namespace {

void CheckLoss(const LearnerState& state, std::span<const double> loss) {
  if (static_cast<int>(loss.size()) != state.num_actions()) {
    throw std::invalid_argument(
        "loss vector has length " + std::to_string(loss.size()) +
        ", learner has " + std::to_string(state.num_actions()) + " actions");
  }
  for (double v : loss) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("loss vector has a non-finite entry");
    }
  }
}

LearnerState Advance(const LearnerState& state, Strategy next,
                     std::span<const double> loss) {
  LearnerState out = state;
  out.strategy = std::move(next);
  out.prev_loss.assign(loss.begin(), loss.end());
  ++out.round;
  return out;
}

}  // namespace

std::string_view ModeName(LearnerMode mode) {
  switch (mode) {
    case LearnerMode::kHedge:
      return "hedge";
    case LearnerMode::kOptHedge:
      return "opt_hedge";
    case LearnerMode::kAdaptiveOptHedge:
      return "adaptive_opt_hedge";
  }
  return "unknown";
}

LearnerMode ParseMode(std::string_view name) {
  if (name == "hedge") return LearnerMode::kHedge;
  if (name == "opt_hedge") return LearnerMode::kOptHedge;
  if (name == "adaptive_opt_hedge") return LearnerMode::kAdaptiveOptHedge;
  throw std::invalid_argument("unknown learner mode '" + std::string(name) +
                              "'");
}

int HorizonExponent(std::int64_t horizon) {
  int h = 0;
  while (h < 62 && (std::int64_t{1} << h) < horizon) ++h;
  return std::max(h, 1);
}

Strategy ExponentialWeights(std::span<const double> x, double eta,
                            std::span<const double> g) {
  const size_t n = x.size();
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < n; ++j) {
    if (x[j] > 0.0) max_exponent = std::max(max_exponent, -eta * g[j]);
  }
  Strategy out(n, 0.0);
  double total = 0.0;
  for (size_t j = 0; j < n; ++j) {
    if (x[j] > 0.0) {
      out[j] = x[j] * std::exp(-eta * g[j] - max_exponent);
      total += out[j];
    }
  }
  for (double& v : out) v /= total;
  return out;
}

LearnerState InitState(int num_actions, double eta, LearnerMode mode,
                       const AdaptiveOptions& adaptive) {
  if (num_actions < 1) {
    throw std::invalid_argument("learner needs at least one action");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("step size must be positive and finite, got " +
                                std::to_string(eta));
  }
  LearnerState state;
  state.strategy.assign(num_actions, 1.0 / num_actions);
  state.prev_loss.assign(num_actions, 0.0);
  state.eta = eta;
  state.mode = mode;
  state.adaptive = adaptive;
  if (mode == LearnerMode::kAdaptiveOptHedge) {
    if (adaptive.horizon < 1) {
      throw std::invalid_argument("adaptive learner needs a horizon T >= 1");
    }
    state.eta_post = std::sqrt(std::log(static_cast<double>(num_actions)) /
                               static_cast<double>(adaptive.horizon));
  }
  return state;
}

LearnerState HedgeStep(const LearnerState& state,
                       std::span<const double> loss) {
  CheckLoss(state, loss);
  return Advance(state, ExponentialWeights(state.strategy, state.eta, loss),
                 loss);
}

LearnerState OptHedgeStep(const LearnerState& state,
                          std::span<const double> loss) {
  CheckLoss(state, loss);
  std::vector<double> optimistic(loss.size());
  for (size_t j = 0; j < loss.size(); ++j) {
    optimistic[j] = 2.0 * loss[j] - state.prev_loss[j];
  }
  return Advance(state,
                 ExponentialWeights(state.strategy, state.eta, optimistic),
                 loss);
}

Strategy IntermediateIterate(const LearnerState& state,
                             std::span<const double> loss) {
  CheckLoss(state, loss);
  std::vector<double> delta(loss.size());
  for (size_t j = 0; j < loss.size(); ++j) {
    delta[j] = loss[j] - state.prev_loss[j];
  }
  return ExponentialWeights(state.strategy, state.eta, delta);
}

LearnerState AdaptiveOptHedgeStep(const LearnerState& state,
                                  std::span<const double> loss) {
  if (state.mode != LearnerMode::kAdaptiveOptHedge) {
    throw std::invalid_argument("AdaptiveOptHedgeStep on a " +
                                std::string(ModeName(state.mode)) +
                                " learner");
  }
  CheckLoss(state, loss);
  if (!state.adaptive.switch_test_enabled) return OptHedgeStep(state, loss);

  LearnerState next = state;
  std::vector<double> delta(loss.size());
  for (size_t j = 0; j < loss.size(); ++j) {
    delta[j] = loss[j] - state.prev_loss[j];
  }
  next.var_delta_sum += Variance(state.strategy, delta);
  next.var_prev_sum += Variance(state.strategy, state.prev_loss);

  if (!next.switched && state.round >= 4) {
    const double h = HorizonExponent(state.adaptive.horizon);
    const double slack = state.adaptive.c_prime * std::pow(h, 5);
    if (next.var_delta_sum > 0.5 * next.var_prev_sum + slack) {
      next.switched = true;
      next.switch_round = state.round;
      next.eta = next.eta_post;
    }
  }
  return OptHedgeStep(next, loss);
}

LearnerState Step(const LearnerState& state, std::span<const double> loss) {
  switch (state.mode) {
    case LearnerMode::kHedge:
      return HedgeStep(state, loss);
    case LearnerMode::kOptHedge:
      return OptHedgeStep(state, loss);
    case LearnerMode::kAdaptiveOptHedge:
      return AdaptiveOptHedgeStep(state, loss);
  }
  throw std::logic_error("unhandled learner mode");
}

double TheoremEta(int num_players, std::int64_t horizon,
                  const BoundConstants& constants) {
  const double log_t = std::max(1.0, std::log2(static_cast<double>(horizon)));
  return 1.0 / (constants.c_thm * num_players * std::pow(log_t, 4));
}

double PracticalEta(int num_players, std::int64_t horizon) {
  const double log_t = std::max(1.0, std::log2(static_cast<double>(horizon)));
  return std::min(0.1, 1.0 / (num_players * log_t * log_t));
}

}  // namespace optdyn
