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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace optdyn {
namespace {

using Vec = std::vector<double>;

double Norm(const Spectrum& s) {
  double acc = 0;
  for (const auto& c : s) acc += std::norm(c);
  return std::sqrt(acc);
}

TEST(DftTest, Impulse) {
  const Spectrum s = Dft(Vec{1, 0, 0, 0});
  for (const auto& c : s) EXPECT_EQ(c, Complex(1, 0));
}

TEST(DftTest, Constant) {
  const Spectrum s = Dft(Vec(6, 0.5));
  EXPECT_NEAR(s[0].real(), 3.0, 1e-15);
  for (size_t k = 1; k < s.size(); ++k) EXPECT_NEAR(std::abs(s[k]), 0.0, 1e-14);
}

TEST(DftTest, MatchesLongDoubleOracle) {
  std::mt19937_64 rng(1);
  for (size_t size : {1u, 2u, 3u, 7u, 16u, 33u}) {
    const Vec w = oracle::RandomSequence(rng, size);
    const Spectrum got = Dft(w);
    const auto want = oracle::Dft(w);
    for (size_t k = 0; k < size; ++k) EXPECT_NEAR(std::abs(got[k] - want[k]), 0, 1e-12);
  }
}

TEST(DftTest, RealInputIsConjugateSymmetric) {
  std::mt19937_64 rng(2);
  const Vec w = oracle::RandomSequence(rng, 37);
  const Spectrum s = Dft(w);
  for (size_t k = 1; k < w.size(); ++k) {
    EXPECT_NEAR(std::abs(s[w.size() - k] - std::conj(s[k])), 0, 1e-10);
  }
}

TEST(DftTest, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  for (size_t size : {1u, 4u, 17u, 64u, 100u}) {
    const Vec w = oracle::RandomSequence(rng, size);
    const Spectrum back = Idft(Dft(w));
    for (size_t t = 0; t < size; ++t) {
      EXPECT_NEAR(back[t].real(), w[t], 1e-12);
      EXPECT_NEAR(back[t].imag(), 0.0, 1e-12);
    }
  }
}

TEST(FftTest, AgreesWithDirect) {
  std::mt19937_64 rng(4);
  for (size_t size : {1u, 2u, 8u, 64u, 1024u}) {
    Spectrum w(size);
    for (auto& c : w) {
      c = {std::uniform_real_distribution<double>(-1, 1)(rng),
           std::uniform_real_distribution<double>(-1, 1)(rng)};
    }
    const Spectrum a = FftRadix2(w);
    const Spectrum b = Dft(w);
    const double scale = Norm(b);
    for (size_t k = 0; k < size; ++k) EXPECT_LE(std::abs(a[k] - b[k]), 1e-12 * scale);
  }
  EXPECT_THROW(FftRadix2(Spectrum(6)), std::invalid_argument);
  EXPECT_TRUE(IsPowerOfTwo(1));
  EXPECT_FALSE(IsPowerOfTwo(0));
  EXPECT_FALSE(IsPowerOfTwo(12));
}

TEST(ParsevalTest, RandomSequences) {
  std::mt19937_64 rng(5);
  for (size_t size : {4u, 17u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      EXPECT_LE(ParsevalRelativeDeviation(oracle::RandomSequence(rng, size)), 1e-12);
    }
  }
  EXPECT_EQ(ParsevalRelativeDeviation(Vec(8, 0.0)), 0.0);
}

TEST(CircularFactTest, Examples) {
  std::mt19937_64 rng(6);
  const Vec w = oracle::RandomSequence(rng, 64);
  const double scale = Norm(Dft(w));
  EXPECT_LE(CheckFourierCircularFact(w, 0), 1e-12);
  EXPECT_LE(CheckFourierCircularFact(w, 1), 1e-10 * scale);
  EXPECT_LE(CheckFourierCircularFact(w, 2), 1e-10 * scale);
}

TEST(CircularFactTest, IndependentOracle) {
  // Transform the oracle's circular difference with the oracle's DFT and
  // compare to the multiplier form evaluated independently.
  std::mt19937_64 rng(7);
  const Vec w = oracle::RandomSequence(rng, 17);
  const auto what = oracle::Dft(w);
  for (int h = 1; h <= 3; ++h) {
    const auto lhs = oracle::Dft(oracle::CircularDifference(w, h));
    for (size_t s = 0; s < w.size(); ++s) {
      const std::complex<double> mult =
          std::pow(std::polar(1.0, 2 * M_PI * s / w.size()) - 1.0, h);
      EXPECT_NEAR(std::abs(lhs[s] - what[s] * mult), 0, 1e-11);
    }
  }
}

}  // namespace
}  // namespace optdyn
