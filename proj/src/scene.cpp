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

#include "earshot/scene.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>

namespace earshot {

namespace {

constexpr double kBackground = 0.05;
constexpr double kBlobColor[3] = {1.0, 0.9, 0.7};

}  // namespace

void SceneSpec::validate(int hop) const {
  if (!(azimuth >= -1.0 && azimuth <= 1.0)) throw std::invalid_argument("scene: azimuth outside [-1, 1]");
  if (!(blob_radius > 0.0) || !std::isfinite(blob_radius)) throw std::invalid_argument("scene: blob radius must be positive");
  if (!std::isfinite(ild_db)) throw std::invalid_argument("scene: ild_db must be finite");
  if (std::abs(itd_samples) >= hop) throw std::invalid_argument("scene: |itd_samples| must be below the hop length");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("scene: duration must be positive");
  if (sample_rate <= 0) throw std::invalid_argument("scene: sample rate must be positive");
  if (!(tone_hz > 0.0) || tone_hz >= sample_rate / 2.0) throw std::invalid_argument("scene: tone frequency outside (0, nyquist)");
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw std::invalid_argument("scene: amplitude must be nonnegative");
  if (frame_height <= 0 || frame_width <= 0) throw std::invalid_argument("scene: frame size must be positive");
}

Scene synth_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);

  Scene scene;
  scene.frame = FrameTensor(3, spec.frame_height, spec.frame_width, kBackground);
  const double cx = (spec.azimuth + 1.0) / 2.0 * spec.frame_width;
  const double cy = spec.frame_height / 2.0;
  const double denom = 2.0 * spec.blob_radius * spec.blob_radius;
  for (int y = 0; y < spec.frame_height; ++y) {
    for (int x = 0; x < spec.frame_width; ++x) {
      // pixel centres
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double g = std::exp(-(dx * dx + dy * dy) / denom);
      for (int c = 0; c < 3; ++c) {
        scene.frame(c, y, x) = kBackground + (kBlobColor[c] - kBackground) * g;
      }
    }
  }

  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.sample_rate));
  std::vector<double> source(n);
  if (spec.source == SourceKind::kTone) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double phi = phase(rng);
    const double w = 2.0 * std::numbers::pi * spec.tone_hz / spec.sample_rate;
    for (std::size_t i = 0; i < n; ++i) source[i] = spec.amplitude * std::sin(w * i + phi);
  } else {
    std::normal_distribution<double> noise(0.0, 1.0);
    for (auto& s : source) s = spec.amplitude * noise(rng);
  }

  std::vector<double> near = source;
  std::vector<double> far(n, 0.0);
  double far_gain = 1.0;
  std::size_t delay = 0;
  if (spec.azimuth != 0.0) {
    far_gain = std::pow(10.0, -spec.ild_db / 20.0);
    delay = static_cast<std::size_t>(std::abs(spec.itd_samples));
  }
  for (std::size_t i = delay; i < n; ++i) far[i] = far_gain * source[i - delay];

  scene.left.sample_rate = scene.right.sample_rate = scene.mono.sample_rate = spec.sample_rate;
  if (spec.azimuth < 0.0) {
    scene.left.samples = std::move(near);
    scene.right.samples = std::move(far);
  } else {
    scene.left.samples = std::move(far);
    scene.right.samples = std::move(near);
  }
  scene.mono.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) scene.mono.samples[i] = scene.left.samples[i] + scene.right.samples[i];
  return scene;
}

std::vector<FrameTensor> left_blob_frames(int count, std::uint64_t seed, int height, int width) {
  if (count <= 0) throw std::invalid_argument("left_blob_frames: count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> azimuth(-0.9, -0.3);
  std::vector<FrameTensor> frames;
  for (int i = 0; i < count; ++i) {
    SceneSpec spec;
    spec.azimuth = azimuth(rng);
    spec.duration = 0.01;
    const Scene scene = synth_scene(spec, rng());
    if (height > spec.frame_height || width > spec.frame_width) {
      throw std::invalid_argument("left_blob_frames: crop larger than frame");
    }
    frames.push_back(crop_frame(scene.frame, (spec.frame_height - height) / 2,
                                (spec.frame_width - width) / 2, height, width));
  }
  return frames;
}

}  // namespace earshot
