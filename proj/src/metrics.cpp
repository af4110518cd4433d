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

#include "earshot/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "earshot/errors.hpp"
#include "earshot/losses.hpp"
#include "earshot/refine.hpp"
#include "fft.hpp"

namespace earshot {

namespace {

void require_same_length(const StereoWaveform& a, const StereoWaveform& b, const char* what) {
  if (a.left.size() != b.left.size() || a.right.size() != b.right.size() ||
      a.left.size() != a.right.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  }
}

double envelope_distance(std::span<const double> a, std::span<const double> b) {
  const auto ea = envelope(a);
  const auto eb = envelope(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i) acc += (ea[i] - eb[i]) * (ea[i] - eb[i]);
  return std::sqrt(acc);
}

double phase_error_sum(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pa = std::atan2(a.im_values()[i], a.re_values()[i]);
    const double pb = std::atan2(b.im_values()[i], b.re_values()[i]);
    acc += std::abs(wrap_phase(pa - pb));
  }
  return acc;
}

}  // namespace

StereoSpectrogram stft_stereo(const StereoWaveform& wave, const StftConfig& config) {
  return {stft(wave.left, config), stft(wave.right, config)};
}

double stft_l2(const StereoSpectrogram& pred, const StereoSpectrogram& gt) {
  return loss_d(pred.left, gt.left) + loss_d(pred.right, gt.right);
}

std::vector<double> envelope(std::span<const double> signal) {
  const std::size_t n = signal.size();
  if (n == 0) return {};
  const detail::ComplexFft fft(n);
  auto buf = fft.make_buffer();
  for (std::size_t i = 0; i < n; ++i) buf[i] = signal[i];
  fft.forward(buf);
  // Analytic signal: keep DC (and Nyquist for even n), double positive
  // frequencies, zero negative ones.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (k < (n + 1) / 2) {
      buf[k] *= 2.0;
    } else if (!(n % 2 == 0 && k == half)) {
      buf[k] = 0.0;
    }
  }
  fft.inverse(buf);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(buf[i]) / static_cast<double>(n);
  return out;
}

double env_distance(const StereoWaveform& pred, const StereoWaveform& gt) {
  require_same_length(pred, gt, "env_distance");
  return envelope_distance(pred.left.samples, gt.left.samples) +
         envelope_distance(pred.right.samples, gt.right.samples);
}

double phase_distance(const StereoSpectrogram& pred, const StereoSpectrogram& gt) {
  require_same_shape(pred.left, gt.left, "phase_distance");
  require_same_shape(pred.right, gt.right, "phase_distance");
  const std::size_t cells = pred.left.size() + pred.right.size();
  if (cells == 0) return 0.0;
  return (phase_error_sum(pred.left, gt.left) + phase_error_sum(pred.right, gt.right)) /
         static_cast<double>(cells);
}

SnrValue snr(const StereoWaveform& pred, const StereoWaveform& gt) {
  require_same_length(pred, gt, "snr");
  double signal = 0.0;
  double error = 0.0;
  for (const auto& [p, g] : {std::pair{&pred.left, &gt.left}, std::pair{&pred.right, &gt.right}}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      signal += g->samples[i] * g->samples[i];
      const double e = g->samples[i] - p->samples[i];
      error += e * e;
    }
  }
  if (!(signal > 0.0)) throw NumericError("undefined SNR");
  if (error < 1e-12 * signal) return {kSnrCapDb, true};
  return {std::min(kSnrCapDb, 10.0 * std::log10(signal / error)), false};
}

MetricReport evaluate_clip(const StereoWaveform& pred, const StereoWaveform& gt,
                           const StftConfig& config) {
  const auto ps = stft_stereo(pred, config);
  const auto gs = stft_stereo(gt, config);
  return {stft_l2(ps, gs), env_distance(pred, gt), phase_distance(ps, gs), snr(pred, gt)};
}

MetricReport aggregate(std::span<const MetricReport> reports) {
  MetricReport mean;
  if (reports.empty()) return mean;
  mean.snr.identical = true;
  for (const auto& r : reports) {
    mean.stft_l2 += r.stft_l2;
    mean.env_dist += r.env_dist;
    mean.phase_dist += r.phase_dist;
    mean.snr.db += r.snr.db;
    mean.snr.identical = mean.snr.identical && r.snr.identical;
  }
  const double n = static_cast<double>(reports.size());
  mean.stft_l2 /= n;
  mean.env_dist /= n;
  mean.phase_dist /= n;
  mean.snr.db /= n;
  return mean;
}

}  // namespace earshot
