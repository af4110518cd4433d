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

#ifndef EARSHOT_AUDIONET_HPP_
#define EARSHOT_AUDIONET_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "earshot/layers.hpp"
#include "earshot/refine.hpp"
#include "earshot/spectral.hpp"
#include "earshot/visual.hpp"

namespace earshot {

/// 2 x F x U real tensor: channel 0 real part, channel 1 imaginary part.
struct RealSpectrogramStack {
  Tensor3 data;
  StftConfig config;
  int sample_rate = kDefaultSampleRate;
};

RealSpectrogramStack stack_real_imag(const ComplexSpectrogram& spec);

/// Inverse of stack_real_imag for a 2-channel tensor.
ComplexSpectrogram unstack_real_imag(const Tensor3& two_channel,
                                     const StftConfig& config, int sample_rate);

/// Maps a descriptor to per-channel scale (gamma) and shift (beta).
struct FilmGenerator {
  Dense gamma;
  Dense beta;
};

struct FilmParams {
  std::vector<FilmGenerator> stages;  // one per decoder stage, coarse to fine
};

/// out_c = gamma_c(d) * features_c + beta_c(d).
Tensor3 film_modulate(const Tensor3& features, std::span<const double> descriptor,
                      const FilmGenerator& generator);

struct RefineHeadParams {
  Dense side;   // pooled side feature -> side channels
  Conv2d mix;   // 1x1 over pyramid + side
  Conv2d out;   // 3x3 to real/imag
};

struct NetConfig {
  std::array<int, 3> widths{8, 16, 32};  // encoder widths, fine to coarse
  int descriptor_dim = 16;
  int feature_channels = 32;  // channels of v_L / v_R
  int side_dim = 8;
  int head_hidden = 16;
};

struct NetParams {
  NetConfig config;
  std::uint64_t seed = 0;
  std::array<Conv2d, 3> down;  // stride-2 encoder stages
  std::array<Conv2d, 3> up;    // decoder stages, coarse to fine
  FilmParams film;
  Conv2d output;  // finest decoder features -> difference spectrogram
  RefineHeadParams left_head;
  RefineHeadParams right_head;

  static NetParams init(const NetConfig& config, std::uint64_t seed);
  void validate() const;
};

/// Decoder outputs, coarse to fine.
struct FeaturePyramid {
  std::vector<Tensor3> levels;
  StftConfig config;
  int sample_rate = kDefaultSampleRate;
};

struct UnetOutput {
  ComplexSpectrogram diff;
  FeaturePyramid pyramid;
};

/// Three stride-2 encoder stages, three upsampling decoder stages with skip
/// connections and FiLM, and a linear 1x1 output giving the difference
/// spectrogram. Throws std::invalid_argument("spectrogram too small") when
/// F or U is below 8.
UnetOutput unet_forward(const RealSpectrogramStack& x,
                        std::span<const double> descriptor,
                        const NetParams& params);

/// Left head sees only v_L, right head only v_R.
std::pair<ComplexSpectrogram, ComplexSpectrogram> refine_heads(
    const FeaturePyramid& pyramid, const FeatureMap& v_left,
    const FeatureMap& v_right, const NetParams& params);

/// Everything the audio side needs from one frame.
struct VisualConditioning {
  AttentionPair attention;
  FeatureMap left;
  FeatureMap right;
  std::vector<double> descriptor;
};

VisualConditioning condition_on_frame(const FrameTensor& frame,
                                      const EncoderParams& encoder);

FusionCandidate generate_candidate(const ComplexSpectrogram& mono,
                                   const VisualConditioning& conditioning,
                                   const NetParams& net);

/// Full forward pass for one segment and one frame.
FusionCandidate spatialize_segment(const ComplexSpectrogram& mono,
                                   const FrameTensor& frame,
                                   const EncoderParams& encoder,
                                   const NetParams& net);

/// Nearest-neighbour upsampling by `factor`, cropped to height x width.
Tensor3 upsample_nearest(const Tensor3& x, int factor, int height, int width);

}  // namespace earshot

#endif  // EARSHOT_AUDIONET_HPP_
