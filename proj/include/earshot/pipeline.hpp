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

#ifndef EARSHOT_PIPELINE_HPP_
#define EARSHOT_PIPELINE_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "earshot/audionet.hpp"
#include "earshot/metrics.hpp"
#include "earshot/refine.hpp"
#include "earshot/tensor_io.hpp"
#include "earshot/visual.hpp"

namespace earshot {

/// Video frames for a clip. With fps <= 0 (or a single frame) the first
/// frame serves every segment.
struct FrameSequence {
  std::vector<FrameTensor> frames;
  double fps = 0.0;

  std::size_t index_at(double seconds) const;
};

struct PipelineOptions {
  StftConfig stft;
  std::size_t seg_len = 10080;
  std::size_t hop = 800;
  int crops = 3;
  int crop_height = 224;
  int crop_width = 448;
  double eps = kDefaultFusionEps;
  bool refine = true;  // false: uniform weights in both stages

  void validate() const;
  Weighting weighting() const { return refine ? Weighting::kConfidence : Weighting::kUniform; }
};

/// `count` crops of the given size, evenly spaced left to right and
/// vertically centred. Throws std::invalid_argument if the frame is smaller
/// than the crop.
std::vector<FrameTensor> crop_views(const FrameTensor& frame, int count, int height,
                                    int width);

/// Segment plan, central frame per segment, K crops, the network per crop,
/// then the two fusion stages. Output has the input's length.
StereoWaveform spatialize_clip(const Waveform& mono, const FrameSequence& frames,
                               const EncoderParams& encoder, const NetParams& net,
                               const PipelineOptions& options);

/// The two fusion stages on externally supplied candidates, one list per
/// planned segment.
StereoWaveform fuse_candidates(const Waveform& mono,
                               std::span<const std::vector<FusionCandidate>> per_segment,
                               const PipelineOptions& options);

/// K x 6 x F x U tensor; the six planes are left, right and difference,
/// each as real then imaginary.
TensorData candidates_to_tensor(std::span<const FusionCandidate> candidates);
std::vector<FusionCandidate> candidates_from_tensor(const TensorData& tensor,
                                                    const StftConfig& config,
                                                    int sample_rate);

/// Ground truth plus copies whose three spectrograms carry independent
/// Gaussian noise scaled by `levels[k]` times the RMS cell magnitude.
/// A level of zero reproduces the ground truth.
std::vector<FusionCandidate> perturbed_candidates(const ComplexSpectrogram& left,
                                                  const ComplexSpectrogram& right,
                                                  std::span<const double> levels,
                                                  std::mt19937_64& rng);

}  // namespace earshot

#endif  // EARSHOT_PIPELINE_HPP_
