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

#ifndef EARSHOT_REFINE_HPP_
#define EARSHOT_REFINE_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "earshot/spectral.hpp"

namespace earshot {

inline constexpr double kDefaultFusionEps = 1e-8;

/// One binaural hypothesis: predicted left, right and difference spectra.
struct FusionCandidate {
  ComplexSpectrogram left;
  ComplexSpectrogram right;
  ComplexSpectrogram diff;

  /// Throws std::invalid_argument unless all three share F x U and config.
  void validate() const;
  /// left - right, the difference implied by the two ear estimates.
  ComplexSpectrogram implied_diff() const;
};

struct ConfidenceScore {
  double e_mono = 0.0;
  double w_mono = 0.0;
  double e_phase = 0.0;
  double w_phase = 0.0;
  double w = 0.0;
  double eps = kDefaultFusionEps;
};

struct SubScore {
  double error = 0.0;
  double weight = 0.0;
};

/// Mean absolute magnitude error between (left + right) / 2 and the mono
/// spectrogram, and its reciprocal weight 1 / (error + eps).
SubScore mono_consistency(const FusionCandidate& candidate,
                          const ComplexSpectrogram& mono,
                          double eps = kDefaultFusionEps);

/// Mean wrapped phase error between left - right and the predicted
/// difference, over every cell, and its reciprocal weight.
SubScore phase_consistency(const FusionCandidate& candidate,
                           double eps = kDefaultFusionEps);

/// Product of the mono and phase weights.
ConfidenceScore score_candidate(const FusionCandidate& candidate,
                                const ComplexSpectrogram& mono,
                                double eps = kDefaultFusionEps);

/// Principal value of an angle in (-pi, pi].
double wrap_phase(double angle);

enum class Weighting {
  kConfidence,  // product-of-experts confidence weights
  kUniform,     // equal weights (no refinement)
};

/// Divides by the sum. Throws NumericError if the sum is not positive and
/// finite.
std::vector<double> normalize_weights(std::span<const double> weights);

/// Result of fusing the K crop candidates of one segment.
struct SegmentFusion {
  Waveform left;
  Waveform right;
  /// Weighted sum of the candidate triples with the same weights as the
  /// waveforms.
  FusionCandidate candidate;
  std::vector<double> weights;  // normalised, one per candidate
  std::vector<ConfidenceScore> scores;
};

/// Stage 1: score each crop candidate, normalise within the segment and sum
/// the inverse-transformed waveforms (`length` samples each). Throws
/// std::invalid_argument("no candidates") for an empty list.
SegmentFusion fuse_intra_segment(std::span<const FusionCandidate> candidates,
                                 const ComplexSpectrogram& mono,
                                 std::size_t length,
                                 double eps = kDefaultFusionEps,
                                 Weighting weighting = Weighting::kConfidence);

struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::size_t size() const { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sliding-window decomposition of a clip. Segments start every `hop`
/// samples while they fit; a residue is covered by one extra segment
/// aligned to the clip end. A clip shorter than `seg_len` becomes a single
/// segment spanning the whole clip.
struct SegmentPlan {
  std::size_t total_len = 0;
  std::size_t seg_len = 0;
  std::size_t hop = 0;
  std::vector<Interval> segments;
  std::size_t regular_count = 0;  // hop-aligned segments, before the tail
  std::vector<Interval> hop_frames;
  /// For each hop frame, the indices of every segment overlapping it.
  std::vector<std::vector<std::size_t>> coverage;
};

SegmentPlan plan_segments(std::size_t total_len, std::size_t seg_len,
                          std::size_t hop);

/// Stage-1 output for one segment together with the mono spectrogram of
/// that segment, which Stage 2 scores against.
struct SegmentResult {
  SegmentFusion fusion;
  ComplexSpectrogram mono;
};

/// Stage 2: score every segment-level candidate, then for each hop frame
/// take the normalised weighted sum of the covering segments' waveforms.
/// Samples of a hop frame that a covering segment does not reach are
/// normalised over the segments that do reach them.
std::pair<Waveform, Waveform> fuse_inter_segment(
    const SegmentPlan& plan, std::span<const SegmentResult> segments,
    double eps = kDefaultFusionEps,
    Weighting weighting = Weighting::kConfidence);

/// The per-segment weights Stage 2 uses (unnormalised).
std::vector<double> segment_weights(std::span<const SegmentResult> segments,
                                    double eps, Weighting weighting);

}  // namespace earshot

#endif  // EARSHOT_REFINE_HPP_
