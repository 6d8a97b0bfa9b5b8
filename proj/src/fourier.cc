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

#include "optdyn/fourier.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "optdyn/finite_difference.h"

namespace optdyn {
namespace {

// exp(sign * 2 pi i k / S) for 0 <= k < S.
std::vector<Complex> Twiddles(size_t size, double sign) {
  std::vector<Complex> out(size);
  for (size_t k = 0; k < size; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(size);
    out[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return out;
}

Spectrum DirectTransform(std::span<const Complex> seq, double sign) {
  const size_t size = seq.size();
  const std::vector<Complex> w = Twiddles(size, sign);
  Spectrum out(size);
  for (size_t s = 0; s < size; ++s) {
    Complex acc = 0.0;
    for (size_t t = 0; t < size; ++t) acc += seq[t] * w[(s * t) % size];
    out[s] = acc;
  }
  return out;
}

}  // namespace

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Spectrum Dft(std::span<const Complex> seq) { return DirectTransform(seq, -1.0); }

Spectrum Dft(std::span<const double> seq) {
  const std::vector<Complex> c(seq.begin(), seq.end());
  return DirectTransform(c, -1.0);
}

Spectrum Idft(std::span<const Complex> spectrum) {
  Spectrum out = DirectTransform(spectrum, 1.0);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : out) v *= scale;
  return out;
}

Spectrum FftRadix2(std::span<const Complex> seq) {
  const size_t size = seq.size();
  if (!IsPowerOfTwo(size)) {
    throw std::invalid_argument("radix-2 transform needs a power-of-two length");
  }
  Spectrum a(seq.begin(), seq.end());
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < size; ++i) {
    size_t bit = size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::vector<Complex> w = Twiddles(size, -1.0);
  for (size_t len = 2; len <= size; len <<= 1) {
    const size_t stride = size / len;
    for (size_t start = 0; start < size; start += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[start + k];
        const Complex v = a[start + k + len / 2] * w[k * stride];
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
  return a;
}

double ParsevalRelativeDeviation(std::span<const double> seq) {
  double time_energy = 0.0;
  for (double v : seq) time_energy += v * v;
  const Spectrum spectrum = Dft(seq);
  double freq_energy = 0.0;
  for (const auto& c : spectrum) freq_energy += std::norm(c);
  freq_energy /= static_cast<double>(seq.size());
  const double diff = std::abs(time_energy - freq_energy);
  return time_energy > 0.0 ? diff / time_energy : diff;
}

double CheckFourierCircularFact(std::span<const double> seq, int h) {
  const size_t size = seq.size();
  const Spectrum lhs = Dft(CircularFiniteDifference(seq, h));
  const Spectrum base = Dft(seq);
  const std::vector<Complex> w = Twiddles(size, 1.0);
  double worst = 0.0;
  for (size_t s = 0; s < size; ++s) {
    const Complex factor = std::pow(w[s] - 1.0, h);
    worst = std::max(worst, std::abs(lhs[s] - base[s] * factor));
  }
  return worst;
}

}  // namespace optdyn
