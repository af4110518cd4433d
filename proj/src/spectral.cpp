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

#include "earshot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "earshot/kernels.hpp"

namespace earshot {

void Waveform::validate() const {
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
  }
}

int StftConfig::frame_count(std::size_t length) const {
  const std::size_t padded = length + 2 * static_cast<std::size_t>(pad());
  if (padded < static_cast<std::size_t>(window_len)) return 0;
  return static_cast<int>(1 + (padded - window_len) / hop_len);
}

void StftConfig::validate() const {
  if (hop_len <= 0 || hop_len > window_len || window_len > fft_len) {
    throw std::invalid_argument("bad stft config");
  }
  // Periodic overlap sum of the squared window at every phase of the hop.
  const auto w = analysis_window(*this);
  for (int phase = 0; phase < hop_len; ++phase) {
    double sum = 0.0;
    for (int i = phase; i < window_len; i += hop_len) sum += w[i] * w[i];
    if (!(sum > 0.0)) throw std::invalid_argument("bad stft config");
  }
}

std::vector<double> analysis_window(const StftConfig& config) {
  std::vector<double> w(config.window_len);
  const double n = config.window_len;
  for (int i = 0; i < config.window_len; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

ComplexSpectrogram::ComplexSpectrogram(const StftConfig& config, int frames,
                                       int sample_rate)
    : config_(config),
      sample_rate_(sample_rate),
      bins_(config.bins()),
      frames_(frames) {
  if (frames < 0) throw std::invalid_argument("negative frame count");
  re_.assign(static_cast<std::size_t>(bins_) * frames_, 0.0);
  im_.assign(re_.size(), 0.0);
}

bool ComplexSpectrogram::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(re_.begin(), re_.end(), finite) &&
         std::all_of(im_.begin(), im_.end(), finite);
}

void require_same_shape(const ComplexSpectrogram& a,
                        const ComplexSpectrogram& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

ComplexSpectrogram& ComplexSpectrogram::operator+=(const ComplexSpectrogram& other) {
  require_same_shape(*this, other, "spectrogram +=");
  for (std::size_t i = 0; i < re_.size(); ++i) {
    re_[i] += other.re_[i];
    im_[i] += other.im_[i];
  }
  return *this;
}

ComplexSpectrogram& ComplexSpectrogram::operator-=(const ComplexSpectrogram& other) {
  require_same_shape(*this, other, "spectrogram -=");
  for (std::size_t i = 0; i < re_.size(); ++i) {
    re_[i] -= other.re_[i];
    im_[i] -= other.im_[i];
  }
  return *this;
}

ComplexSpectrogram& ComplexSpectrogram::operator*=(double scale) {
  for (auto& v : re_) v *= scale;
  for (auto& v : im_) v *= scale;
  return *this;
}

void ComplexSpectrogram::add_scaled(const ComplexSpectrogram& other, double scale) {
  require_same_shape(*this, other, "spectrogram add_scaled");
  for (std::size_t i = 0; i < re_.size(); ++i) {
    re_[i] += scale * other.re_[i];
    im_[i] += scale * other.im_[i];
  }
}

ComplexSpectrogram operator+(ComplexSpectrogram a, const ComplexSpectrogram& b) {
  a += b;
  return a;
}

ComplexSpectrogram operator-(ComplexSpectrogram a, const ComplexSpectrogram& b) {
  a -= b;
  return a;
}

ComplexSpectrogram operator*(double scale, ComplexSpectrogram a) {
  a *= scale;
  return a;
}

ComplexSpectrogram stft(const Waveform& wave, const StftConfig& config) {
  if (wave.samples.empty()) throw std::invalid_argument("empty input");
  config.validate();

  const int frames = config.frame_count(wave.size());
  const std::size_t pad = config.pad();
  const std::size_t needed =
      static_cast<std::size_t>(frames - 1) * config.hop_len + config.window_len;
  std::vector<double> padded(std::max(needed, wave.size() + 2 * pad), 0.0);
  std::copy(wave.samples.begin(), wave.samples.end(), padded.begin() + pad);

  ComplexSpectrogram out(config, frames, wave.sample_rate);
  kernels::omp::stft_frames(padded, analysis_window(config), out);
  return out;
}

Waveform istft(const ComplexSpectrogram& spec, std::size_t length) {
  const StftConfig& config = spec.config();
  config.validate();
  Waveform out;
  out.sample_rate = spec.sample_rate();
  if (length == 0) return out;

  const std::size_t pad = config.pad();
  const std::size_t span =
      spec.frames() == 0
          ? 0
          : static_cast<std::size_t>(spec.frames() - 1) * config.hop_len +
                config.window_len;
  if (pad + length > span) throw std::invalid_argument("non-invertible config");

  const auto window = analysis_window(config);
  std::vector<double> numerator(span);
  kernels::omp::overlap_add(spec, window, numerator);

  std::vector<double> denominator(span, 0.0);
  for (int u = 0; u < spec.frames(); ++u) {
    const std::size_t start = static_cast<std::size_t>(u) * config.hop_len;
    for (int i = 0; i < config.window_len; ++i) {
      denominator[start + i] += window[i] * window[i];
    }
  }

  out.samples.resize(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double den = denominator[pad + n];
    if (!(den > 1e-12)) throw std::invalid_argument("non-invertible config");
    out.samples[n] = numerator[pad + n] / den;
  }
  return out;
}

Waveform mono_mix(const Waveform& left, const Waveform& right) {
  if (left.size() != right.size() || left.sample_rate != right.sample_rate) {
    throw std::invalid_argument("mono_mix: length or sample rate mismatch");
  }
  Waveform out;
  out.sample_rate = left.sample_rate;
  out.samples.resize(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    out.samples[i] = left.samples[i] + right.samples[i];
  }
  return out;
}

ComplexSpectrogram diff_spectrogram(const ComplexSpectrogram& left,
                                    const ComplexSpectrogram& right) {
  require_same_shape(left, right, "diff_spectrogram");
  return left - right;
}

}  // namespace earshot
