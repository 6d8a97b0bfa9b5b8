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

#ifndef OPTDYN_FOURIER_H_
#define OPTDYN_FOURIER_H_

#include <complex>
#include <span>
#include <vector>

namespace optdyn {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// W^_s = sum_t W^t exp(-2 pi i s t / S), evaluated directly in O(S^2). The
// twiddle index s*t is reduced mod S before the trig call.
Spectrum Dft(std::span<const double> seq);
Spectrum Dft(std::span<const Complex> seq);

// Inverse: W^t = (1/S) sum_s W^_s exp(+2 pi i s t / S).
Spectrum Idft(std::span<const Complex> spectrum);

// Iterative radix-2 Cooley-Tukey with the same sign convention as Dft.
// Throws std::invalid_argument unless the length is a power of two.
Spectrum FftRadix2(std::span<const Complex> seq);

bool IsPowerOfTwo(size_t n);

// |sum_t |W^t|^2 - (1/S) sum_s |W^_s|^2|, divided by sum_t |W^t|^2 when that
// is nonzero.
double ParsevalRelativeDeviation(std::span<const double> seq);

// max_s |DFT(D~^h W)_s - W^_s (exp(2 pi i s / S) - 1)^h|.
double CheckFourierCircularFact(std::span<const double> seq, int h);

}  // namespace optdyn

#endif  // OPTDYN_FOURIER_H_
