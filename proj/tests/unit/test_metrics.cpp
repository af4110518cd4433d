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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "earshot/errors.hpp"
#include "earshot/losses.hpp"
#include "earshot/metrics.hpp"
#include "support/oracles.hpp"

namespace earshot {
namespace {

using testing::random_spectrogram;
using testing::random_wave;

StereoSpectrogram random_stereo(int frames, std::uint64_t seed) {
  return {random_spectrogram(StftConfig{}, frames, seed), random_spectrogram(StftConfig{}, frames, seed + 1000)};
}

StereoWaveform random_stereo_wave(std::size_t n, std::uint64_t seed) {
  return {random_wave(n, seed), random_wave(n, seed + 1000)};
}

// Analytic-signal magnitude by an O(n^2) DFT pair.
std::vector<double> naive_envelope(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spec(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t)
      spec[k] += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * t % n) / double(n));
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) spec[k] *= 2.0;
    else if (2 * k > n) spec[k] = 0.0;
  }
  std::vector<double> env(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::complex<double> acc;
    for (std::size_t k = 0; k < n; ++k)
      acc += spec[k] * std::polar(1.0, 2.0 * std::numbers::pi * double(k * t % n) / double(n));
    env[t] = std::abs(acc) / double(n);
  }
  return env;
}

TEST(StftL2, Examples) {
  const auto a = random_stereo(16, 1);
  EXPECT_EQ(stft_l2(a, a), 0.0);
  auto b = a;
  b.left = random_spectrogram(StftConfig{}, 16, 7);
  EXPECT_EQ(stft_l2(b, a), loss_d(b.left, a.left));
}

TEST(StftL2, MatchesBruteForce) {
  const auto a = random_stereo(64, 2);
  const auto b = random_stereo(64, 3);
  double el = 0.0, er = 0.0;
  for (int f = 0; f < 257; ++f)
    for (int u = 0; u < 64; ++u) {
      el += std::norm(a.left.at(f, u) - b.left.at(f, u));
      er += std::norm(a.right.at(f, u) - b.right.at(f, u));
    }
  const double expected = std::sqrt(el) + std::sqrt(er);
  EXPECT_NEAR(stft_l2(a, b), expected, 1e-12 * expected);
  EXPECT_THROW(stft_l2(a, random_stereo(63, 2)), std::invalid_argument);
}

TEST(Envelope, MatchesDirectHilbert) {
  for (std::size_t n : {1u, 2u, 7u, 64u, 101u}) {
    const auto x = testing::random_signal(n, n);
    const auto fast = envelope(x);
    const auto slow = naive_envelope(x);
    ASSERT_EQ(fast.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12) << n << " " << i;
  }
  EXPECT_TRUE(envelope({}).empty());
}

TEST(Envelope, PureToneIsFlat) {
  const std::size_t n = 16000;
  const double amp = 0.6;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * 437.3 * i / 16000.0);
  const auto env = envelope(x);
  for (std::size_t i = n / 10; i < n - n / 10; ++i) ASSERT_NEAR(env[i], amp, 0.01 * amp) << i;

  const StereoWaveform tone{Waveform{x, 16000}, Waveform{std::vector<double>(n), 16000}};
  const StereoWaveform silence{Waveform{std::vector<double>(n), 16000}, Waveform{std::vector<double>(n), 16000}};
  EXPECT_NEAR(env_distance(tone, silence), amp * std::sqrt(double(n)), 0.01 * amp * std::sqrt(double(n)));
}

TEST(EnvDistance, IdentityAndPolarity) {
  const auto a = random_stereo_wave(3000, 4);
  EXPECT_EQ(env_distance(a, a), 0.0);
  auto flipped = a;
  for (auto& v : flipped.left.samples) v = -v;
  for (auto& v : flipped.right.samples) v = -v;
  EXPECT_NEAR(env_distance(flipped, a), 0.0, 1e-12);
  EXPECT_THROW(env_distance(a, random_stereo_wave(2999, 4)), std::invalid_argument);
}

TEST(PhaseDistance, Examples) {
  const auto gt = random_stereo(32, 5);
  EXPECT_EQ(phase_distance(gt, gt), 0.0);
  auto rotated = gt;
  for (auto* ear : {&rotated.left, &rotated.right})
    for (int f = 0; f < ear->bins(); ++f)
      for (int u = 0; u < ear->frames(); ++u) ear->set(f, u, std::complex<double>(0.0, 1.0) * ear->at(f, u));
  EXPECT_NEAR(phase_distance(rotated, gt), std::numbers::pi / 2, 1e-9);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double d = phase_distance(random_stereo(8, 10 * s), random_stereo(8, 10 * s + 5));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, std::numbers::pi);
  }
}

TEST(Snr, Examples) {
  const auto gt = random_stereo_wave(16000, 6);
  const auto same = snr(gt, gt);
  EXPECT_TRUE(same.identical);
  EXPECT_GE(same.db, 120.0);

  // Noise rescaled to exactly 1% of the signal power.
  auto noisy = gt;
  auto nl = random_wave(16000, 61), nr = random_wave(16000, 62);
  double ps = 0.0, pn = 0.0;
  for (std::size_t k = 0; k < 16000; ++k) {
    ps += gt.left.samples[k] * gt.left.samples[k] + gt.right.samples[k] * gt.right.samples[k];
    pn += nl.samples[k] * nl.samples[k] + nr.samples[k] * nr.samples[k];
  }
  const double g = std::sqrt(0.01 * ps / pn);
  for (std::size_t k = 0; k < 16000; ++k) {
    noisy.left.samples[k] += g * nl.samples[k];
    noisy.right.samples[k] += g * nr.samples[k];
  }
  const auto r = snr(noisy, gt);
  EXPECT_FALSE(r.identical);
  EXPECT_NEAR(r.db, 20.0, 0.5);
  EXPECT_NEAR(r.db, 20.0, 1e-9);

  StereoWaveform zero{Waveform{std::vector<double>(16000), 16000}, Waveform{std::vector<double>(16000), 16000}};
  EXPECT_NEAR(snr(zero, gt).db, 0.0, 1e-12);
  try {
    snr(gt, zero);
    ADD_FAILURE();
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "undefined SNR");
  }
}

TEST(MetricProperties, SwapSymmetry) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = random_stereo_wave(4000, 20 + s), g = random_stereo_wave(4000, 40 + s);
    const StereoWaveform ps{p.right, p.left}, gs{g.right, g.left};
    const auto a = evaluate_clip(p, g), b = evaluate_clip(ps, gs);
    EXPECT_NEAR(a.stft_l2, b.stft_l2, 1e-12 * a.stft_l2);
    EXPECT_NEAR(a.env_dist, b.env_dist, 1e-12 * a.env_dist);
    EXPECT_NEAR(a.phase_dist, b.phase_dist, 1e-12);
    EXPECT_NEAR(a.snr.db, b.snr.db, 1e-12);
  }
}

TEST(MetricProperties, TriangleInequality) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = random_stereo(4, 3 * s), b = random_stereo(4, 3 * s + 1), c = random_stereo(4, 3 * s + 2);
    EXPECT_LE(stft_l2(a, c), stft_l2(a, b) + stft_l2(b, c) + 1e-12);
    const auto x = random_stereo_wave(500, 3 * s), y = random_stereo_wave(500, 3 * s + 1),
               z = random_stereo_wave(500, 3 * s + 2);
    EXPECT_LE(env_distance(x, z), env_distance(x, y) + env_distance(y, z) + 1e-12);
  }
}

TEST(MetricProperties, SnrScaleInvariant) {
  const auto p = random_stereo_wave(2000, 8), g = random_stereo_wave(2000, 9);
  auto ps = p, gs = g;
  for (auto* w : {&ps.left, &ps.right, &gs.left, &gs.right})
    for (auto& v : w->samples) v *= 3.7;
  EXPECT_NEAR(snr(p, g).db, snr(ps, gs).db, 1e-10);
}

TEST(Aggregate, MeanOfReports) {
  const std::vector<MetricReport> rs{{1.0, 2.0, 0.5, {10.0, false}}, {3.0, 4.0, 1.5, {120.0, true}}};
  const auto m = aggregate(rs);
  EXPECT_EQ(m.stft_l2, 2.0);
  EXPECT_EQ(m.env_dist, 3.0);
  EXPECT_EQ(m.phase_dist, 1.0);
  EXPECT_EQ(m.snr.db, 65.0);
  EXPECT_FALSE(m.snr.identical);
}

}  // namespace
}  // namespace earshot
