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

#ifndef EARSHOT_KERNELS_HPP_
#define EARSHOT_KERNELS_HPP_

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// straightforward reference kept for testing, `omp` is the OpenMP version
// the library calls. Both accumulate in the same order, so their results
// are bit-identical.

#include <span>

#include "earshot/refine.hpp"
#include "earshot/spectral.hpp"
#include "earshot/tensor.hpp"

namespace earshot::kernels {

/// Convolution geometry: square kernel, zero padding kernel / 2.
struct ConvShape {
  int kernel = 3;
  int stride = 1;
};

/// Output spatial size of a ConvShape applied to `n` samples.
inline int conv_output_size(int n, const ConvShape& shape) {
  const int pad = shape.kernel / 2;
  return (n + 2 * pad - shape.kernel) / shape.stride + 1;
}

namespace serial {

/// Fills every frame of `out` from the zero-padded signal `padded`.
void stft_frames(std::span<const double> padded, std::span<const double> window,
                 ComplexSpectrogram& out);

/// Windowed inverse transforms overlap-added into `padded_out`, which must
/// hold (frames - 1) * hop + window_len samples. Not normalised.
void overlap_add(const ComplexSpectrogram& spec,
                 std::span<const double> window, std::span<double> padded_out);

/// weights: C_out x C_in x k x k, bias: C_out. `out` must be pre-sized.
void conv2d(const Tensor3& in, std::span<const double> weights,
            std::span<const double> bias, const ConvShape& shape,
            Tensor3& out);

/// Stage-2 fusion of one ear: out[n] = sum_s w_s * signal_s[n - start_s]
/// over the covering segments reaching n, divided by the sum of their w_s.
void fuse_hop_frames(const SegmentPlan& plan, std::span<const double> weights,
                     std::span<const std::span<const double>> signals,
                     std::span<double> out);

}  // namespace serial

namespace omp {

void stft_frames(std::span<const double> padded, std::span<const double> window,
                 ComplexSpectrogram& out);
void overlap_add(const ComplexSpectrogram& spec,
                 std::span<const double> window, std::span<double> padded_out);
void conv2d(const Tensor3& in, std::span<const double> weights,
            std::span<const double> bias, const ConvShape& shape,
            Tensor3& out);
void fuse_hop_frames(const SegmentPlan& plan, std::span<const double> weights,
                     std::span<const std::span<const double>> signals,
                     std::span<double> out);

}  // namespace omp

}  // namespace earshot::kernels

#endif  // EARSHOT_KERNELS_HPP_
