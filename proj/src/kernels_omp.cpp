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

#include <omp.h>

#include <algorithm>
#include <vector>

#include "earshot/kernels.hpp"
#include "fft.hpp"

namespace earshot::kernels::omp {

void stft_frames(std::span<const double> padded, std::span<const double> window,
                 ComplexSpectrogram& out) {
  const StftConfig& cfg = out.config();
  const detail::RealFft fft(cfg.fft_len);
  const int frames = out.frames();
#pragma omp parallel
  {
    auto buffers = fft.make_buffers();
#pragma omp for schedule(static)
    for (int u = 0; u < frames; ++u) {
      const std::size_t start = static_cast<std::size_t>(u) * cfg.hop_len;
      std::fill(buffers.time.span().begin(), buffers.time.span().end(), 0.0);
      for (int i = 0; i < cfg.window_len; ++i) {
        buffers.time[i] = padded[start + i] * window[i];
      }
      fft.forward(buffers);
      for (int f = 0; f < out.bins(); ++f) out.set(f, u, buffers.freq[f]);
    }
  }
}

void overlap_add(const ComplexSpectrogram& spec,
                 std::span<const double> window, std::span<double> padded_out) {
  const StftConfig& cfg = spec.config();
  const detail::RealFft fft(cfg.fft_len);
  const double scale = 1.0 / cfg.fft_len;
  const int frames = spec.frames();
  const int wlen = cfg.window_len;
  const int hop = cfg.hop_len;

  // Inverse transforms are independent per frame; the sum is then gathered
  // per output sample in ascending frame order, matching the serial scatter.
  std::vector<double> pieces(static_cast<std::size_t>(frames) * wlen);
#pragma omp parallel
  {
    auto buffers = fft.make_buffers();
#pragma omp for schedule(static)
    for (int u = 0; u < frames; ++u) {
      for (int f = 0; f < spec.bins(); ++f) buffers.freq[f] = spec.at(f, u);
      fft.inverse(buffers);
      double* piece = pieces.data() + static_cast<std::size_t>(u) * wlen;
      for (int i = 0; i < wlen; ++i) piece[i] = (buffers.time[i] * scale) * window[i];
    }
  }

  const long long total = static_cast<long long>(padded_out.size());
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < total; ++n) {
    // Frames u with u * hop <= n < u * hop + wlen.
    const long long first = n < wlen ? 0 : (n - wlen) / hop + 1;
    const long long last = std::min<long long>(n / hop, frames - 1);
    double acc = 0.0;
    for (long long u = first; u <= last; ++u) {
      acc += pieces[static_cast<std::size_t>(u) * wlen + (n - u * hop)];
    }
    padded_out[n] = acc;
  }
}

void conv2d(const Tensor3& in, std::span<const double> weights,
            std::span<const double> bias, const ConvShape& shape,
            Tensor3& out) {
  const int k = shape.kernel;
  const int s = shape.stride;
  const int pad = k / 2;
  const int cin = in.channels();
  const int hin = in.height();
  const int win = in.width();
  const int cout = out.channels();
  const int hout = out.height();
  const int wout = out.width();

  // Each output plane accumulates bias, then (ci, ky, kx) in ascending
  // order, which is the per-element order of the serial kernel.
#pragma omp parallel for collapse(2) schedule(static)
  for (int co = 0; co < cout; ++co) {
    for (int y = 0; y < hout; ++y) {
      double* row = &out(co, y, 0);
      std::fill(row, row + wout, bias[co]);
      for (int ci = 0; ci < cin; ++ci) {
        for (int ky = 0; ky < k; ++ky) {
          const int iy = y * s + ky - pad;
          if (iy < 0 || iy >= hin) continue;
          const double* src = in.channel(ci).data() + static_cast<std::size_t>(iy) * win;
          for (int kx = 0; kx < k; ++kx) {
            const double w =
                weights[((static_cast<std::size_t>(co) * cin + ci) * k + ky) * k + kx];
            // Valid x satisfy 0 <= x * s + kx - pad < win.
            const int x0 = std::max(0, (pad - kx + s - 1) / s);
            const int x1 = std::min(wout, (win + pad - kx + s - 1) / s);
            const int shift = kx - pad;
            if (s == 1) {
              for (int x = x0; x < x1; ++x) row[x] += w * src[x + shift];
            } else {
              for (int x = x0; x < x1; ++x) row[x] += w * src[x * s + shift];
            }
          }
        }
      }
    }
  }
}

void fuse_hop_frames(const SegmentPlan& plan, std::span<const double> weights,
                     std::span<const std::span<const double>> signals,
                     std::span<double> out) {
  const long long frames = static_cast<long long>(plan.hop_frames.size());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < frames; ++j) {
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

}  // namespace earshot::kernels::omp
