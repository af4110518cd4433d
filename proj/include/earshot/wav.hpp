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

#ifndef EARSHOT_WAV_HPP_
#define EARSHOT_WAV_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "earshot/spectral.hpp"

namespace earshot {

enum class SampleFormat { kPcm16, kFloat32 };

/// All channels at the file's own rate.
std::vector<Waveform> read_wav_native(const std::filesystem::path& path);

/// All channels, linearly resampled to `target_rate` when the file differs.
/// Throws FormatError on malformed headers or unsupported codecs.
std::vector<Waveform> read_wav(const std::filesystem::path& path,
                               int target_rate = kDefaultSampleRate);

/// Channels must share length and rate. PCM16 clamps to [-1, 1).
void write_wav(const std::filesystem::path& path, std::span<const Waveform> channels,
               SampleFormat format = SampleFormat::kFloat32);

/// Linear interpolation onto a `target_rate` grid; output length is
/// round(length * target_rate / sample_rate).
Waveform resample_linear(const Waveform& wave, int target_rate);

}  // namespace earshot

#endif  // EARSHOT_WAV_HPP_
