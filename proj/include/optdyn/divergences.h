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

#ifndef OPTDYN_DIVERGENCES_H_
#define OPTDYN_DIVERGENCES_H_

#include <span>

namespace optdyn {

// Var_P[v] = sum_j P(j) (v(j) - <P, v>)^2. Throws std::invalid_argument on
// length mismatch.
double Variance(std::span<const double> p, std::span<const double> v);

struct LocalNorms {
  double primal = 0.0;  // ||v||_P = sqrt(sum_j P(j) v(j)^2)
  double dual = 0.0;    // ||v||_{*,P} = sqrt(sum_j v(j)^2 / P(j))
};

// Throws std::domain_error when P(j) = 0 while v(j) != 0, since the dual
// norm is then undefined. Coordinates with P(j) = 0 and v(j) = 0 contribute
// nothing.
LocalNorms ComputeLocalNorms(std::span<const double> p,
                             std::span<const double> v);

// KL in nats. When Q(j) = 0 < P(j) both values are +infinity and `finite`
// is false.
struct DivergenceValues {
  double kl = 0.0;
  double chi2 = 0.0;
  bool finite = true;
};

DivergenceValues Divergences(std::span<const double> p,
                             std::span<const double> q);

}  // namespace optdyn

#endif  // OPTDYN_DIVERGENCES_H_
