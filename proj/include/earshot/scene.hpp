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

#ifndef EARSHOT_SCENE_HPP_
#define EARSHOT_SCENE_HPP_

#include <cstdint>
#include <vector>

#include "earshot/spectral.hpp"
#include "earshot/visual.hpp"

namespace earshot {

enum class SourceKind { kTone, kNoise };

/// Synthetic single-source scene. Negative azimuth puts the source on the
/// left; the far ear gets the level drop and the delay. At zero azimuth
/// both ears carry the unmodified source.
struct SceneSpec {
  double azimuth = 0.0;  // [-1, 1]
  double blob_radius = 24.0;
  double ild_db = 6.0;
  int itd_samples = 8;
  SourceKind source = SourceKind::kTone;
  double duration = 1.0;  // seconds
  int sample_rate = kDefaultSampleRate;
  double tone_hz = 440.0;
  double amplitude = 0.25;
  int frame_height = 240;
  int frame_width = 480;

  /// Throws std::invalid_argument; |itd_samples| must stay below `hop`.
  void validate(int hop = 160) const;
};

struct Scene {
  FrameTensor frame;  // 3 x frame_height x frame_width
  Waveform left;
  Waveform right;
  Waveform mono;  // left + right
};

Scene synth_scene(const SceneSpec& spec, std::uint64_t seed);

/// Frames of `count` scenes with the source on the left half (azimuth
/// drawn from [-0.9, -0.3]), centre-cropped to height x width.
std::vector<FrameTensor> left_blob_frames(int count, std::uint64_t seed, int height = 224,
                                          int width = 448);

}  // namespace earshot

#endif  // EARSHOT_SCENE_HPP_
