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

#include "optdyn/finite_difference.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "optdyn/format.h"

namespace optdyn {
namespace {

void CheckOrder(size_t length, int h) {
  if (h < 0 || static_cast<size_t>(h) >= length) {
    throw std::out_of_range("finite difference order " + std::to_string(h) +
                            " out of range for length " +
                            std::to_string(length));
  }
}

}  // namespace

std::vector<double> FiniteDifference(std::span<const double> seq, int h) {
  CheckOrder(seq.size(), h);
  std::vector<double> current(seq.begin(), seq.end());
  for (int level = 0; level < h; ++level) {
    for (size_t t = 0; t + 1 < current.size(); ++t) {
      current[t] = current[t + 1] - current[t];
    }
    current.pop_back();
  }
  return current;
}

VectorSequence FiniteDifference(const VectorSequence& seq, int h) {
  CheckOrder(seq.size(), h);
  VectorSequence current = seq;
  for (int level = 0; level < h; ++level) {
    for (size_t t = 0; t + 1 < current.size(); ++t) {
      for (size_t j = 0; j < current[t].size(); ++j) {
        current[t][j] = current[t + 1][j] - current[t][j];
      }
    }
    current.pop_back();
  }
  return current;
}

double FiniteDifferenceBinomial(std::span<const double> seq, int h,
                                std::int64_t t) {
  CheckOrder(seq.size(), h);
  const auto length = static_cast<std::int64_t>(seq.size());
  if (t < 1 || t > length - h) {
    throw std::out_of_range("binomial finite difference index out of range");
  }
  double total = 0.0;
  double binom = 1.0;  // C(h, s)
  for (int s = 0; s <= h; ++s) {
    const double sign = ((h - s) % 2 == 0) ? 1.0 : -1.0;
    total += sign * binom * seq[t - 1 + s];
    binom = binom * (h - s) / (s + 1);
  }
  return total;
}

std::vector<double> CircularFiniteDifference(std::span<const double> seq,
                                             int h) {
  if (h < 0) throw std::out_of_range("circular difference order must be >= 0");
  std::vector<double> current(seq.begin(), seq.end());
  const size_t size = current.size();
  std::vector<double> next(size);
  for (int level = 0; level < h; ++level) {
    for (size_t t = 0; t < size; ++t) {
      next[t] = current[(t + 1) % size] - current[t];
    }
    current.swap(next);
  }
  return current;
}

FiniteDifferenceProfile FdDecayProfile(const VectorSequence& losses,
                                       int h_max) {
  CheckOrder(losses.size(), h_max);
  FiniteDifferenceProfile profile;
  VectorSequence current = losses;
  for (int h = 0; h <= h_max; ++h) {
    if (h > 0) current = FiniteDifference(current, 1);
    double sup = 0.0;
    for (const auto& v : current) {
      for (double x : v) sup = std::max(sup, std::abs(x));
    }
    profile.orders.push_back(current);
    profile.sup_norms.push_back(sup);
  }
  for (int h = 0; h < h_max; ++h) {
    if (profile.sup_norms[h] > 0.0) {
      profile.ratios.push_back(profile.sup_norms[h + 1] /
                               profile.sup_norms[h]);
    } else {
      profile.ratios.push_back(std::nullopt);
    }
  }
  return profile;
}

void WriteFdProfileCsv(const FiniteDifferenceProfile& profile,
                       std::ostream& out) {
  out << "order,t,component,value\n";
  for (size_t h = 0; h < profile.orders.size(); ++h) {
    const auto& seq = profile.orders[h];
    for (size_t t = 0; t < seq.size(); ++t) {
      for (size_t j = 0; j < seq[t].size(); ++j) {
        out << h << ',' << t + 1 << ',' << j + 1 << ','
            << FormatDouble(seq[t][j]) << '\n';
      }
    }
  }
}

void WriteFdSupNormCsv(const FiniteDifferenceProfile& profile,
                       std::ostream& out) {
  out << "order,sup_norm\n";
  for (size_t h = 0; h < profile.sup_norms.size(); ++h) {
    out << h << ',' << FormatDouble(profile.sup_norms[h]) << '\n';
  }
}

}  // namespace optdyn
