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

#ifndef OPTDYN_FINITE_DIFFERENCE_H_
#define OPTDYN_FINITE_DIFFERENCE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace optdyn {

using VectorSequence = std::vector<std::vector<double>>;

// Order-h forward difference, D^h = D^1(D^{h-1}), D^0 = seq. The result has
// seq.size() - h entries. Throws std::out_of_range unless 0 <= h < size.
std::vector<double> FiniteDifference(std::span<const double> seq, int h);
VectorSequence FiniteDifference(const VectorSequence& seq, int h);

// (D^h seq)^t via sum_{s=0}^h C(h,s) (-1)^{h-s} seq^{t+s}. `t` is 1-indexed,
// 1 <= t <= size - h; throws std::out_of_range otherwise.
double FiniteDifferenceBinomial(std::span<const double> seq, int h,
                                std::int64_t t);

// Level-h circular difference: same recursion, but the last entry wraps to
// the front, (D~ W)^{S-1} = W^0 - W^{S-1}. Output length equals input length.
std::vector<double> CircularFiniteDifference(std::span<const double> seq,
                                             int h);

// Per-order finite differences of a loss sequence and their sup norms.
struct FiniteDifferenceProfile {
  std::vector<VectorSequence> orders;  // orders[h] = D^h, length T - h
  std::vector<double> sup_norms;       // sup_t ||(D^h)^t||_inf
  // r_h = sup_norms[h+1] / sup_norms[h]; empty when sup_norms[h] == 0.
  std::vector<std::optional<double>> ratios;
};

// Orders 0..h_max. Throws std::out_of_range unless 0 <= h_max < T.
FiniteDifferenceProfile FdDecayProfile(const VectorSequence& losses,
                                       int h_max);

// CSV: order,t,component,value (1-indexed t and component).
void WriteFdProfileCsv(const FiniteDifferenceProfile& profile,
                       std::ostream& out);
// CSV: order,sup_norm.
void WriteFdSupNormCsv(const FiniteDifferenceProfile& profile,
                       std::ostream& out);

}  // namespace optdyn

#endif  // OPTDYN_FINITE_DIFFERENCE_H_
