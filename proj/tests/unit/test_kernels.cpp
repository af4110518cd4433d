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

#include <random>

#include "earshot/kernels.hpp"
#include "earshot/layers.hpp"
#include "support/oracles.hpp"

namespace earshot {
namespace {

Tensor3 random_tensor(int c, int h, int w, std::uint64_t seed) {
  Tensor3 t(c, h, w);
  const auto v = testing::random_signal(t.size(), seed);
  std::copy(v.begin(), v.end(), t.values().begin());
  return t;
}

// Explicitly zero-padded input, then a plain sliding dot product.
Tensor3 conv_oracle(const Tensor3& in, const std::vector<double>& w, const std::vector<double>& b,
                    int cout, int k, int stride) {
  const int pad = k / 2;
  const int hp = in.height() + 2 * pad, wp = in.width() + 2 * pad;
  Tensor3 padded(in.channels(), hp, wp);
  for (int c = 0; c < in.channels(); ++c)
    for (int y = 0; y < in.height(); ++y)
      for (int x = 0; x < in.width(); ++x) padded(c, y + pad, x + pad) = in(c, y, x);
  const int ho = (hp - k) / stride + 1, wo = (wp - k) / stride + 1;
  Tensor3 out(cout, ho, wo);
  for (int o = 0; o < cout; ++o)
    for (int y = 0; y < ho; ++y)
      for (int x = 0; x < wo; ++x) {
        double acc = b[o];
        for (int c = 0; c < in.channels(); ++c)
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              acc += w[((o * in.channels() + c) * k + i) * k + j] * padded(c, y * stride + i, x * stride + j);
        out(o, y, x) = acc;
      }
  return out;
}

TEST(Conv2d, MatchesOracleAndSerialEqualsParallel) {
  struct Case {
    int cin, cout, h, w, k, s;
  };
  for (const Case& c : {Case{2, 8, 257, 64, 3, 2}, Case{3, 4, 9, 7, 3, 1}, Case{5, 2, 6, 11, 1, 1},
                        Case{1, 1, 1, 1, 3, 1}, Case{4, 3, 10, 10, 5, 2}, Case{2, 2, 8, 5, 3, 3}}) {
    const auto in = random_tensor(c.cin, c.h, c.w, 1);
    const auto w = testing::random_signal(static_cast<std::size_t>(c.cout) * c.cin * c.k * c.k, 2);
    const auto b = testing::random_signal(c.cout, 3);
    const kernels::ConvShape shape{c.k, c.s};
    const int ho = kernels::conv_output_size(c.h, shape), wo = kernels::conv_output_size(c.w, shape);
    Tensor3 serial(c.cout, ho, wo), parallel(c.cout, ho, wo);
    kernels::serial::conv2d(in, w, b, shape, serial);
    kernels::omp::conv2d(in, w, b, shape, parallel);
    EXPECT_EQ(serial, parallel) << c.cin << "x" << c.h << "x" << c.w << " k" << c.k << " s" << c.s;
    const auto ref = conv_oracle(in, w, b, c.cout, c.k, c.s);
    ASSERT_TRUE(ref.same_shape(serial));
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(ref.values()[i], serial.values()[i], 1e-12);
  }
}

TEST(StftFrames, SerialEqualsParallel) {
  for (StftConfig cfg : {StftConfig{}, StftConfig{400, 100, 512}, StftConfig{4, 2, 4}}) {
    const auto x = testing::random_signal(5000, 4);
    const int frames = cfg.frame_count(x.size());
    std::vector<double> padded(x.size() + 2 * cfg.pad() + cfg.window_len, 0.0);
    std::copy(x.begin(), x.end(), padded.begin() + cfg.pad());
    const auto window = analysis_window(cfg);
    ComplexSpectrogram a(cfg, frames), b(cfg, frames);
    kernels::serial::stft_frames(padded, window, a);
    kernels::omp::stft_frames(padded, window, b);
    EXPECT_EQ(a, b);
  }
}

TEST(OverlapAdd, SerialEqualsParallel) {
  for (StftConfig cfg : {StftConfig{}, StftConfig{400, 100, 512}, StftConfig{256, 96, 256}}) {
    const auto spec = testing::random_spectrogram(cfg, 37, 5);
    const std::size_t len = static_cast<std::size_t>(36) * cfg.hop_len + cfg.window_len;
    std::vector<double> a(len), b(len);
    const auto window = analysis_window(cfg);
    kernels::serial::overlap_add(spec, window, a);
    kernels::omp::overlap_add(spec, window, b);
    EXPECT_EQ(a, b);
  }
}

TEST(ConvOutputSize, Arithmetic) {
  EXPECT_EQ(kernels::conv_output_size(257, {3, 2}), 129);
  EXPECT_EQ(kernels::conv_output_size(129, {3, 2}), 65);
  EXPECT_EQ(kernels::conv_output_size(65, {3, 2}), 33);
  EXPECT_EQ(kernels::conv_output_size(64, {3, 2}), 32);
  EXPECT_EQ(kernels::conv_output_size(10, {3, 1}), 10);
  EXPECT_EQ(kernels::conv_output_size(10, {1, 1}), 10);
}

TEST(Layers, DenseAndLeakyRelu) {
  ParamInit init(3);
  const Dense d = Dense::uniform(4, 3, 0.5, init);
  const std::vector<double> x{1.0, -2.0, 0.5, 3.0};
  const auto y = d.apply(x);
  for (int o = 0; o < 3; ++o) {
    double acc = d.bias[o];
    for (int i = 0; i < 4; ++i) acc += d.weights[o * 4 + i] * x[i];
    EXPECT_DOUBLE_EQ(y[o], acc);
  }
  EXPECT_EQ(leaky_relu(2.0), 2.0);
  EXPECT_EQ(leaky_relu(-2.0), -0.4);
  for (double w : d.weights) {
    EXPECT_LE(std::abs(w), 0.5);
    EXPECT_EQ(static_cast<double>(static_cast<float>(w)), w);
  }
  EXPECT_THROW(d.apply(std::vector<double>(3)), std::invalid_argument);
}

TEST(Layers, ParamInitIsSeeded) {
  ParamInit a(42), b(42), c(43);
  EXPECT_EQ(a.uniform(10, 1.0), b.uniform(10, 1.0));
  EXPECT_NE(a.uniform(10, 1.0), c.uniform(10, 1.0));
}

}  // namespace
}  // namespace earshot
