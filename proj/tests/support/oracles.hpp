// Copyright 2026 The Earshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EARSHOT_TESTS_ORACLES_HPP_
#define EARSHOT_TESTS_ORACLES_HPP_

// Slow, direct reference computations written independently of the
// library code paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "earshot/spectral.hpp"

namespace earshot::testing {

inline std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline Waveform random_wave(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  return Waveform{random_signal(n, seed, scale), kDefaultSampleRate};
}

inline double hann(int i, int n) {
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
}

/// X(f, u) = sum_i hann(i) x[u hop + i - pad] exp(-2 pi j f i / N), with x
/// zero outside its support.
inline std::complex<double> dft_cell(const std::vector<double>& x, const StftConfig& c, int f,
                                     int u) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < c.window_len; ++i) {
    const long n = static_cast<long>(u) * c.hop_len + i - c.window_len / 2;
    if (n < 0 || n >= static_cast<long>(x.size())) continue;
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(f) * i / c.fft_len;
    acc += hann(i, c.window_len) * x[n] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

inline double l2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline ComplexSpectrogram random_spectrogram(const StftConfig& c, int frames, std::uint64_t seed,
                                             double scale = 1.0) {
  ComplexSpectrogram s(c, frames);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  for (auto& v : s.re_values()) v = d(rng);
  for (auto& v : s.im_values()) v = d(rng);
  return s;
}

}  // namespace earshot::testing

#endif  // EARSHOT_TESTS_ORACLES_HPP_
