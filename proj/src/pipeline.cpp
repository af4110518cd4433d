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

#include "earshot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <stdexcept>

#include "earshot/errors.hpp"

namespace earshot {

namespace {

// First exception thrown inside a parallel region, rethrown afterwards.
class ErrorSlot {
 public:
  void capture() {
#pragma omp critical(earshot_pipeline_error)
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

Waveform slice(const Waveform& wave, const Interval& range) {
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.samples.assign(wave.samples.begin() + static_cast<std::ptrdiff_t>(range.begin),
                     wave.samples.begin() + static_cast<std::ptrdiff_t>(range.end));
  return out;
}

StereoWaveform run_fusion(
    const Waveform& mono, const SegmentPlan& plan, const PipelineOptions& options,
    const std::function<std::vector<FusionCandidate>(std::size_t, const ComplexSpectrogram&)>&
        candidates_for) {
  const auto count = static_cast<long>(plan.segments.size());
  std::vector<SegmentResult> results(plan.segments.size());
  ErrorSlot error;
#pragma omp parallel for schedule(dynamic)
  for (long s = 0; s < count; ++s) {
    try {
      const Interval& seg = plan.segments[s];
      ComplexSpectrogram seg_mono = stft(slice(mono, seg), options.stft);
      const auto cands = candidates_for(static_cast<std::size_t>(s), seg_mono);
      results[s].fusion = fuse_intra_segment(cands, seg_mono, seg.size(), options.eps,
                                             options.weighting());
      results[s].mono = std::move(seg_mono);
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();

  auto [left, right] = fuse_inter_segment(plan, results, options.eps, options.weighting());
  return {std::move(left), std::move(right)};
}

}  // namespace

std::size_t FrameSequence::index_at(double seconds) const {
  if (frames.empty()) throw std::invalid_argument("frame sequence is empty");
  if (fps <= 0.0 || frames.size() == 1) return 0;
  const double pos = std::floor(std::max(seconds, 0.0) * fps);
  return std::min(frames.size() - 1, static_cast<std::size_t>(pos));
}

void PipelineOptions::validate() const {
  stft.validate();
  if (seg_len == 0 || hop == 0 || hop > seg_len) throw std::invalid_argument("pipeline: need 0 < hop <= seg_len");
  if (crops <= 0) throw std::invalid_argument("pipeline: crop count must be positive");
  if (crop_height <= 0 || crop_width <= 0) throw std::invalid_argument("pipeline: crop size must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("pipeline: eps must be positive");
}

std::vector<FrameTensor> crop_views(const FrameTensor& frame, int count, int height, int width) {
  if (count <= 0) throw std::invalid_argument("crop_views: count must be positive");
  if (frame.height() < height || frame.width() < width) {
    throw std::invalid_argument("crop_views: frame smaller than crop");
  }
  const int top = (frame.height() - height) / 2;
  const int span = frame.width() - width;
  std::vector<FrameTensor> views;
  views.reserve(count);
  for (int k = 0; k < count; ++k) {
    const int left = count == 1 ? span / 2
                                : static_cast<int>(std::lround(static_cast<double>(k) * span / (count - 1)));
    views.push_back(crop_frame(frame, top, left, height, width));
  }
  return views;
}

StereoWaveform spatialize_clip(const Waveform& mono, const FrameSequence& frames,
                               const EncoderParams& encoder, const NetParams& net,
                               const PipelineOptions& options) {
  options.validate();
  mono.validate();
  if (mono.samples.empty()) throw std::invalid_argument("spatialize: empty input");
  const SegmentPlan plan = plan_segments(mono.size(), options.seg_len, options.hop);

  // Frame index per segment, from the segment's centre time.
  std::vector<std::size_t> frame_of(plan.segments.size());
  std::map<std::size_t, std::size_t> slot_of;  // frame index -> cache slot
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    const auto& seg = plan.segments[s];
    const double centre = 0.5 * static_cast<double>(seg.begin + seg.end) / mono.sample_rate;
    frame_of[s] = frames.index_at(centre);
    slot_of.emplace(frame_of[s], slot_of.size());
  }

  // Visual conditioning depends only on (frame, crop); compute each once.
  std::vector<std::size_t> slot_frame(slot_of.size());
  for (const auto& [frame, slot] : slot_of) slot_frame[slot] = frame;
  const long jobs = static_cast<long>(slot_frame.size()) * options.crops;
  std::vector<VisualConditioning> cache(static_cast<std::size_t>(jobs));
  ErrorSlot error;
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < jobs; ++j) {
    try {
      const auto slot = static_cast<std::size_t>(j / options.crops);
      const int k = static_cast<int>(j % options.crops);
      const FrameTensor& frame = frames.frames[slot_frame[slot]];
      const auto views = crop_views(frame, options.crops, options.crop_height, options.crop_width);
      cache[j] = condition_on_frame(views[k], encoder);
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();

  return run_fusion(mono, plan, options,
                    [&](std::size_t s, const ComplexSpectrogram& seg_mono) {
                      const std::size_t base = slot_of.at(frame_of[s]) * options.crops;
                      std::vector<FusionCandidate> cands;
                      cands.reserve(options.crops);
                      for (int k = 0; k < options.crops; ++k) {
                        cands.push_back(generate_candidate(seg_mono, cache[base + k], net));
                      }
                      return cands;
                    });
}

StereoWaveform fuse_candidates(const Waveform& mono,
                               std::span<const std::vector<FusionCandidate>> per_segment,
                               const PipelineOptions& options) {
  options.validate();
  mono.validate();
  if (mono.samples.empty()) throw std::invalid_argument("fuse: empty input");
  const SegmentPlan plan = plan_segments(mono.size(), options.seg_len, options.hop);
  if (per_segment.size() != plan.segments.size()) {
    throw std::invalid_argument("fuse: expected " + std::to_string(plan.segments.size()) +
                                " candidate sets, got " + std::to_string(per_segment.size()));
  }
  return run_fusion(mono, plan, options,
                    [&](std::size_t s, const ComplexSpectrogram& seg_mono) {
                      for (const auto& c : per_segment[s]) {
                        if (!c.left.same_shape(seg_mono)) {
                          throw std::invalid_argument("fuse: candidate shape does not match segment " +
                                                      std::to_string(s));
                        }
                      }
                      return per_segment[s];
                    });
}

TensorData candidates_to_tensor(std::span<const FusionCandidate> candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidates_to_tensor: no candidates");
  const int bins = candidates.front().left.bins();
  const int frames = candidates.front().left.frames();
  TensorData t;
  t.dims = {static_cast<std::uint32_t>(candidates.size()), 6u, static_cast<std::uint32_t>(bins),
            static_cast<std::uint32_t>(frames)};
  t.values.reserve(t.element_count());
  for (const auto& c : candidates) {
    c.validate();
    if (!c.left.same_shape(candidates.front().left)) {
      throw std::invalid_argument("candidates_to_tensor: candidates differ in shape");
    }
    for (const ComplexSpectrogram* s : {&c.left, &c.right, &c.diff}) {
      for (double v : s->re_values()) t.values.push_back(static_cast<float>(v));
      for (double v : s->im_values()) t.values.push_back(static_cast<float>(v));
    }
  }
  return t;
}

std::vector<FusionCandidate> candidates_from_tensor(const TensorData& tensor,
                                                    const StftConfig& config, int sample_rate) {
  if (tensor.dims.size() != 4 || tensor.dims[1] != 6 || tensor.dims[0] == 0) {
    throw FormatError("candidate tensor must be K x 6 x F x U with K > 0");
  }
  if (static_cast<int>(tensor.dims[2]) != config.bins()) {
    throw FormatError("candidate tensor bin count does not match the STFT config");
  }
  const int frames = static_cast<int>(tensor.dims[3]);
  const std::size_t plane = static_cast<std::size_t>(config.bins()) * frames;
  std::vector<FusionCandidate> out;
  auto it = tensor.values.begin();
  for (std::uint32_t k = 0; k < tensor.dims[0]; ++k) {
    FusionCandidate c;
    for (ComplexSpectrogram* s : {&c.left, &c.right, &c.diff}) {
      *s = ComplexSpectrogram(config, frames, sample_rate);
      std::copy(it, it + static_cast<std::ptrdiff_t>(plane), s->re_values().begin());
      it += static_cast<std::ptrdiff_t>(plane);
      std::copy(it, it + static_cast<std::ptrdiff_t>(plane), s->im_values().begin());
      it += static_cast<std::ptrdiff_t>(plane);
    }
    if (!c.left.all_finite() || !c.right.all_finite() || !c.diff.all_finite()) {
      throw FormatError("candidate tensor contains non-finite values");
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<FusionCandidate> perturbed_candidates(const ComplexSpectrogram& left,
                                                  const ComplexSpectrogram& right,
                                                  std::span<const double> levels,
                                                  std::mt19937_64& rng) {
  require_same_shape(left, right, "perturbed_candidates");
  const ComplexSpectrogram diff = left - right;
  auto rms = [](const ComplexSpectrogram& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc += s.re_values()[i] * s.re_values()[i] + s.im_values()[i] * s.im_values()[i];
    }
    return s.size() ? std::sqrt(acc / static_cast<double>(s.size())) : 0.0;
  };
  const double scale[3] = {rms(left), rms(right), rms(diff)};

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<FusionCandidate> out;
  for (double level : levels) {
    if (!(level >= 0.0)) throw std::invalid_argument("perturbed_candidates: negative level");
    FusionCandidate c{left, right, diff};
    ComplexSpectrogram* parts[3] = {&c.left, &c.right, &c.diff};
    for (int p = 0; p < 3; ++p) {
      if (level == 0.0) continue;
      const double sigma = level * scale[p] / std::sqrt(2.0);
      for (auto& v : parts[p]->re_values()) v += sigma * normal(rng);
      for (auto& v : parts[p]->im_values()) v += sigma * normal(rng);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace earshot
