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

#ifndef EARSHOT_SPECTRAL_HPP_
#define EARSHOT_SPECTRAL_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace earshot {

inline constexpr int kDefaultSampleRate = 16000;

/// Single-channel signal.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  /// Throws std::invalid_argument on a non-positive rate or non-finite
  /// samples.
  void validate() const;

  friend bool operator==(const Waveform&, const Waveform&) = default;
};

enum class WindowKind { kHann };

/// Analysis/synthesis framing. Signals are zero-padded by window_len / 2 at
/// both ends, so frame u is centred on sample u * hop_len.
struct StftConfig {
  int window_len = 512;
  int hop_len = 160;
  int fft_len = 512;
  WindowKind window = WindowKind::kHann;

  int pad() const { return window_len / 2; }
  int bins() const { return fft_len / 2 + 1; }
  /// Frame count for a signal of `length` samples (length >= 1).
  int frame_count(std::size_t length) const;

  /// Throws std::invalid_argument("bad stft config") unless
  /// 0 < hop <= window <= fft and the periodic squared-window overlap sum is
  /// positive everywhere.
  void validate() const;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

/// Periodic Hann window of config.window_len samples.
std::vector<double> analysis_window(const StftConfig& config);

/// One-sided complex spectrogram, F = fft_len / 2 + 1 bins by U frames,
/// stored bin-major (index f * U + u) in separate real/imaginary planes.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  /// All-zero spectrogram with `frames` frames.
  ComplexSpectrogram(const StftConfig& config, int frames,
                     int sample_rate = kDefaultSampleRate);

  const StftConfig& config() const { return config_; }
  int sample_rate() const { return sample_rate_; }
  int bins() const { return bins_; }
  int frames() const { return frames_; }
  std::size_t size() const { return re_.size(); }

  double& re(int f, int u) { return re_[index(f, u)]; }
  double& im(int f, int u) { return im_[index(f, u)]; }
  double re(int f, int u) const { return re_[index(f, u)]; }
  double im(int f, int u) const { return im_[index(f, u)]; }
  std::complex<double> at(int f, int u) const {
    return {re_[index(f, u)], im_[index(f, u)]};
  }
  void set(int f, int u, std::complex<double> value) {
    re_[index(f, u)] = value.real();
    im_[index(f, u)] = value.imag();
  }

  std::span<double> re_values() { return re_; }
  std::span<double> im_values() { return im_; }
  std::span<const double> re_values() const { return re_; }
  std::span<const double> im_values() const { return im_; }

  /// Same F x U and framing configuration.
  bool same_shape(const ComplexSpectrogram& other) const {
    return bins_ == other.bins_ && frames_ == other.frames_ &&
           config_ == other.config_;
  }
  bool all_finite() const;

  ComplexSpectrogram& operator+=(const ComplexSpectrogram& other);
  ComplexSpectrogram& operator-=(const ComplexSpectrogram& other);
  ComplexSpectrogram& operator*=(double scale);
  /// this += scale * other
  void add_scaled(const ComplexSpectrogram& other, double scale);

  friend bool operator==(const ComplexSpectrogram&,
                         const ComplexSpectrogram&) = default;

 private:
  std::size_t index(int f, int u) const {
    return static_cast<std::size_t>(f) * frames_ + u;
  }

  StftConfig config_{};
  int sample_rate_ = kDefaultSampleRate;
  int bins_ = 0;
  int frames_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

ComplexSpectrogram operator+(ComplexSpectrogram a, const ComplexSpectrogram& b);
ComplexSpectrogram operator-(ComplexSpectrogram a, const ComplexSpectrogram& b);
ComplexSpectrogram operator*(double scale, ComplexSpectrogram a);

/// Throws std::invalid_argument(what) unless a and b have the same shape.
void require_same_shape(const ComplexSpectrogram& a,
                        const ComplexSpectrogram& b, const char* what);

/// Windowed one-sided DFT of every frame. Errors: "empty input",
/// "bad stft config".
ComplexSpectrogram stft(const Waveform& wave, const StftConfig& config = {});

/// Weighted overlap-add synthesis normalised by the squared-window overlap
/// sum; returns the `length` samples that follow the analysis padding.
/// Throws std::invalid_argument("non-invertible config") when the overlap
/// sum vanishes inside the retained region.
Waveform istft(const ComplexSpectrogram& spec, std::size_t length);

/// Sample-wise sum of two channels of equal length and rate.
Waveform mono_mix(const Waveform& left, const Waveform& right);

/// Element-wise complex difference left - right.
ComplexSpectrogram diff_spectrogram(const ComplexSpectrogram& left,
                                    const ComplexSpectrogram& right);

}  // namespace earshot

#endif  // EARSHOT_SPECTRAL_HPP_
