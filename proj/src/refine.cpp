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

#include "earshot/refine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "earshot/errors.hpp"
#include "earshot/kernels.hpp"

namespace earshot {

void FusionCandidate::validate() const {
  require_same_shape(left, right, "fusion candidate");
  require_same_shape(left, diff, "fusion candidate");
}

ComplexSpectrogram FusionCandidate::implied_diff() const {
  return diff_spectrogram(left, right);
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

SubScore mono_consistency(const FusionCandidate& candidate,
                          const ComplexSpectrogram& mono, double eps) {
  candidate.validate();
  require_same_shape(candidate.left, mono, "mono_consistency");
  const std::size_t n = mono.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> predicted(
        (candidate.left.re_values()[i] + candidate.right.re_values()[i]) / 2.0,
        (candidate.left.im_values()[i] + candidate.right.im_values()[i]) / 2.0);
    const std::complex<double> observed(mono.re_values()[i], mono.im_values()[i]);
    acc += std::abs(std::abs(predicted) - std::abs(observed));
  }
  const double error = n == 0 ? 0.0 : acc / static_cast<double>(n);
  return {error, 1.0 / (error + eps)};
}

SubScore phase_consistency(const FusionCandidate& candidate, double eps) {
  candidate.validate();
  const std::size_t n = candidate.left.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = candidate.left.re_values()[i] - candidate.right.re_values()[i];
    const double di = candidate.left.im_values()[i] - candidate.right.im_values()[i];
    const double implied = std::atan2(di, dr);
    const double predicted =
        std::atan2(candidate.diff.im_values()[i], candidate.diff.re_values()[i]);
    acc += std::abs(wrap_phase(implied - predicted));
  }
  const double error = n == 0 ? 0.0 : acc / static_cast<double>(n);
  return {error, 1.0 / (error + eps)};
}

ConfidenceScore score_candidate(const FusionCandidate& candidate,
                                const ComplexSpectrogram& mono, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const SubScore m = mono_consistency(candidate, mono, eps);
  const SubScore p = phase_consistency(candidate, eps);
  return {m.error, m.weight, p.error, p.weight, m.weight * p.weight, eps};
}

std::vector<double> normalize_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericError("fusion weights do not have a positive finite sum");
  }
  std::vector<double> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
  return out;
}

SegmentFusion fuse_intra_segment(std::span<const FusionCandidate> candidates,
                                 const ComplexSpectrogram& mono, std::size_t length,
                                 double eps, Weighting weighting) {
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  SegmentFusion out;
  std::vector<double> raw;
  for (const auto& c : candidates) {
    require_same_shape(c.left, candidates.front().left, "fuse_intra_segment");
    out.scores.push_back(score_candidate(c, mono, eps));
    raw.push_back(weighting == Weighting::kConfidence ? out.scores.back().w : 1.0);
  }
  out.weights = normalize_weights(raw);

  const auto& first = candidates.front().left;
  out.candidate = {ComplexSpectrogram(first.config(), first.frames(), first.sample_rate()),
                   ComplexSpectrogram(first.config(), first.frames(), first.sample_rate()),
                   ComplexSpectrogram(first.config(), first.frames(), first.sample_rate())};
  out.left.sample_rate = out.right.sample_rate = first.sample_rate();
  out.left.samples.assign(length, 0.0);
  out.right.samples.assign(length, 0.0);

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double w = out.weights[k];
    const auto& c = candidates[k];
    out.candidate.left.add_scaled(c.left, w);
    out.candidate.right.add_scaled(c.right, w);
    out.candidate.diff.add_scaled(c.diff, w);
    const Waveform left = istft(c.left, length);
    const Waveform right = istft(c.right, length);
    for (std::size_t n = 0; n < length; ++n) {
      out.left.samples[n] += w * left.samples[n];
      out.right.samples[n] += w * right.samples[n];
    }
  }
  return out;
}

SegmentPlan plan_segments(std::size_t total_len, std::size_t seg_len, std::size_t hop) {
  if (hop < 1 || seg_len < hop) throw std::invalid_argument("plan_segments: need seg_len >= hop >= 1");
  SegmentPlan plan;
  plan.total_len = total_len;
  plan.seg_len = seg_len;
  plan.hop = hop;
  if (total_len == 0) return plan;

  if (total_len <= seg_len) {
    plan.segments.push_back({0, total_len});
    plan.regular_count = 1;
  } else {
    for (std::size_t start = 0; start + seg_len <= total_len; start += hop) {
      plan.segments.push_back({start, start + seg_len});
    }
    plan.regular_count = plan.segments.size();
    if (plan.segments.back().end < total_len) {
      plan.segments.push_back({total_len - seg_len, total_len});
    }
  }

  for (std::size_t begin = 0; begin < total_len; begin += hop) {
    const Interval frame{begin, std::min(begin + hop, total_len)};
    std::vector<std::size_t> cover;
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
      const Interval seg = plan.segments[s];
      if (seg.begin < frame.end && frame.begin < seg.end) cover.push_back(s);
    }
    plan.hop_frames.push_back(frame);
    plan.coverage.push_back(std::move(cover));
  }
  return plan;
}

std::vector<double> segment_weights(std::span<const SegmentResult> segments,
                                    double eps, Weighting weighting) {
  std::vector<double> w;
  w.reserve(segments.size());
  for (const auto& s : segments) {
    w.push_back(weighting == Weighting::kConfidence
                    ? score_candidate(s.fusion.candidate, s.mono, eps).w
                    : 1.0);
  }
  return w;
}

std::pair<Waveform, Waveform> fuse_inter_segment(const SegmentPlan& plan,
                                                 std::span<const SegmentResult> segments,
                                                 double eps, Weighting weighting) {
  if (segments.size() != plan.segments.size()) {
    throw std::invalid_argument("fuse_inter_segment: one result per planned segment required");
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::size_t len = plan.segments[s].size();
    if (segments[s].fusion.left.size() != len || segments[s].fusion.right.size() != len) {
      throw std::invalid_argument("fuse_inter_segment: segment waveform length mismatch");
    }
  }
  for (const auto& cover : plan.coverage) {
    if (cover.empty()) throw std::logic_error("fuse_inter_segment: uncovered hop frame");
  }

  const auto weights = segment_weights(segments, eps, weighting);
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw NumericError("non-finite segment weight");
  }

  std::vector<std::span<const double>> left_signals, right_signals;
  for (const auto& s : segments) {
    left_signals.emplace_back(s.fusion.left.samples);
    right_signals.emplace_back(s.fusion.right.samples);
  }
  const int rate = segments.empty() ? kDefaultSampleRate : segments.front().fusion.left.sample_rate;
  Waveform left{std::vector<double>(plan.total_len), rate};
  Waveform right{std::vector<double>(plan.total_len), rate};
  kernels::omp::fuse_hop_frames(plan, weights, left_signals, left.samples);
  kernels::omp::fuse_hop_frames(plan, weights, right_signals, right.samples);
  return {std::move(left), std::move(right)};
}

}  // namespace earshot
