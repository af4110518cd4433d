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

#include <algorithm>
#include <stdexcept>

#include "earshot/kernels.hpp"
#include "fft.hpp"

namespace earshot::kernels::serial {

void stft_frames(std::span<const double> padded, std::span<const double> window,
                 ComplexSpectrogram& out) {
  const StftConfig& cfg = out.config();
  const detail::RealFft fft(cfg.fft_len);
  auto buffers = fft.make_buffers();
  for (int u = 0; u < out.frames(); ++u) {
    const std::size_t start = static_cast<std::size_t>(u) * cfg.hop_len;
    std::fill(buffers.time.span().begin(), buffers.time.span().end(), 0.0);
    for (int i = 0; i < cfg.window_len; ++i) {
      buffers.time[i] = padded[start + i] * window[i];
    }
    fft.forward(buffers);
    for (int f = 0; f < out.bins(); ++f) out.set(f, u, buffers.freq[f]);
  }
}

void overlap_add(const ComplexSpectrogram& spec,
                 std::span<const double> window, std::span<double> padded_out) {
  const StftConfig& cfg = spec.config();
  const detail::RealFft fft(cfg.fft_len);
  auto buffers = fft.make_buffers();
  const double scale = 1.0 / cfg.fft_len;
  std::fill(padded_out.begin(), padded_out.end(), 0.0);
  for (int u = 0; u < spec.frames(); ++u) {
    for (int f = 0; f < spec.bins(); ++f) buffers.freq[f] = spec.at(f, u);
    fft.inverse(buffers);
    const std::size_t start = static_cast<std::size_t>(u) * cfg.hop_len;
    for (int i = 0; i < cfg.window_len; ++i) {
      padded_out[start + i] += (buffers.time[i] * scale) * window[i];
    }
  }
}

void conv2d(const Tensor3& in, std::span<const double> weights,
            std::span<const double> bias, const ConvShape& shape,
            Tensor3& out) {
  const int k = shape.kernel;
  const int s = shape.stride;
  const int pad = k / 2;
  const int cin = in.channels();
  for (int co = 0; co < out.channels(); ++co) {
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        double acc = bias[co];
        for (int ci = 0; ci < cin; ++ci) {
          for (int ky = 0; ky < k; ++ky) {
            const int iy = y * s + ky - pad;
            if (iy < 0 || iy >= in.height()) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = x * s + kx - pad;
              if (ix < 0 || ix >= in.width()) continue;
              acc += weights[((static_cast<std::size_t>(co) * cin + ci) * k + ky) * k + kx] *
                     in(ci, iy, ix);
            }
          }
        }
        out(co, y, x) = acc;
      }
    }
  }
}

void fuse_hop_frames(const SegmentPlan& plan, std::span<const double> weights,
                     std::span<const std::span<const double>> signals,
                     std::span<double> out) {
  for (std::size_t j = 0; j < plan.hop_frames.size(); ++j) {
    const Interval frame = plan.hop_frames[j];
    const auto& cover = plan.coverage[j];
    for (std::size_t n = frame.begin; n < frame.end; ++n) {
      double total = 0.0;
      for (std::size_t s : cover) {
        const Interval seg = plan.segments[s];
        if (n >= seg.begin && n < seg.end) total += weights[s];
      }
      double acc = 0.0;
      for (std::size_t s : cover) {
        const Interval seg = plan.segments[s];
        if (n >= seg.begin && n < seg.end) {
          acc += (weights[s] / total) * signals[s][n - seg.begin];
        }
      }
      out[n] = acc;
    }
  }
}

}  // namespace earshot::kernels::serial
