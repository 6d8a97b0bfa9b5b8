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

#include "optdyn/divergences.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace optdyn {
namespace {

void CheckLengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("length mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

}  // namespace

double Variance(std::span<const double> p, std::span<const double> v) {
  CheckLengths(p, v);
  double mean = 0.0;
  for (size_t j = 0; j < p.size(); ++j) mean += p[j] * v[j];
  double var = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    const double d = v[j] - mean;
    var += p[j] * d * d;
  }
  return var;
}

LocalNorms ComputeLocalNorms(std::span<const double> p,
                             std::span<const double> v) {
  CheckLengths(p, v);
  double primal = 0.0;
  double dual = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    const double sq = v[j] * v[j];
    primal += p[j] * sq;
    if (sq == 0.0) continue;
    if (p[j] <= 0.0) {
      throw std::domain_error("dual local norm undefined: P(" +
                              std::to_string(j + 1) + ") = 0 with v != 0");
    }
    dual += sq / p[j];
  }
  return {std::sqrt(primal), std::sqrt(dual)};
}

DivergenceValues Divergences(std::span<const double> p,
                             std::span<const double> q) {
  CheckLengths(p, q);
  DivergenceValues out;
  for (size_t j = 0; j < p.size(); ++j) {
    if (q[j] <= 0.0) {
      if (p[j] > 0.0) {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        return {kInf, kInf, false};
      }
      continue;
    }
    if (p[j] > 0.0) out.kl += p[j] * std::log(p[j] / q[j]);
    const double d = p[j] - q[j];
    out.chi2 += d * d / q[j];
  }
  return out;
}

}  // namespace optdyn
