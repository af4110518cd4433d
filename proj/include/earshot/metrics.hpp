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

#ifndef EARSHOT_METRICS_HPP_
#define EARSHOT_METRICS_HPP_

#include <span>
#include <vector>

#include "earshot/spectral.hpp"

namespace earshot {

struct StereoSpectrogram {
  ComplexSpectrogram left;
  ComplexSpectrogram right;
};

struct StereoWaveform {
  Waveform left;
  Waveform right;
};

StereoSpectrogram stft_stereo(const StereoWaveform& wave, const StftConfig& config = {});

/// Frobenius distance between complex spectrograms, summed over both ears.
double stft_l2(const StereoSpectrogram& pred, const StereoSpectrogram& gt);

/// Magnitude of the analytic signal, built from a full-length DFT.
std::vector<double> envelope(std::span<const double> signal);

/// l2 distance between envelopes, summed over both ears.
double env_distance(const StereoWaveform& pred, const StereoWaveform& gt);

/// Mean over ears and cells of the wrapped absolute phase difference.
double phase_distance(const StereoSpectrogram& pred, const StereoSpectrogram& gt);

inline constexpr double kSnrCapDb = 120.0;

struct SnrValue {
  double db = 0.0;
  bool identical = false;  // error energy below 1e-12 of the signal; db capped
};

/// 10 log10(sum gt^2 / sum (gt - pred)^2) over both ears jointly. Throws
/// NumericError("undefined SNR") for an all-zero reference.
SnrValue snr(const StereoWaveform& pred, const StereoWaveform& gt);

struct MetricReport {
  double stft_l2 = 0.0;
  double env_dist = 0.0;
  double phase_dist = 0.0;
  SnrValue snr;
};

MetricReport evaluate_clip(const StereoWaveform& pred, const StereoWaveform& gt,
                           const StftConfig& config = {});

/// Field-wise mean over clips; snr.identical only if every clip is.
MetricReport aggregate(std::span<const MetricReport> reports);

}  // namespace earshot

#endif  // EARSHOT_METRICS_HPP_
