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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "earshot/errors.hpp"
#include "earshot/pipeline.hpp"
#include "earshot/refine.hpp"
#include "support/naive_fusion.hpp"
#include "support/oracles.hpp"

namespace earshot {
namespace {

using testing::random_spectrogram;

const StftConfig kToy{4, 2, 4};

FusionCandidate random_candidate(const StftConfig& c, int frames, std::uint64_t seed) {
  return {random_spectrogram(c, frames, seed), random_spectrogram(c, frames, seed + 1),
          random_spectrogram(c, frames, seed + 2)};
}

ComplexSpectrogram rotate(const ComplexSpectrogram& s, std::complex<double> by) {
  ComplexSpectrogram out = s;
  for (int f = 0; f < s.bins(); ++f)
    for (int u = 0; u < s.frames(); ++u) out.set(f, u, by * s.at(f, u));
  return out;
}

TEST(MonoConsistency, PerfectCandidate) {
  const auto mono = random_spectrogram(StftConfig{}, 4, 1);
  const FusionCandidate c{mono, mono, random_spectrogram(StftConfig{}, 4, 2)};
  const auto s = mono_consistency(c, mono, 1e-8);
  EXPECT_EQ(s.error, 0.0);
  EXPECT_DOUBLE_EQ(s.weight, 1e8);
}

TEST(MonoConsistency, ConstantExcess) {
  const auto mono = random_spectrogram(StftConfig{}, 4, 3);
  FusionCandidate c{mono, mono, mono};
  for (int f = 0; f < mono.bins(); ++f) {
    for (int u = 0; u < mono.frames(); ++u) {
      const auto m = mono.at(f, u);
      const auto scaled = std::polar(std::abs(m) + 0.2, std::arg(m));
      c.left.set(f, u, scaled);
      c.right.set(f, u, scaled);
    }
  }
  const auto s = mono_consistency(c, mono, 1e-8);
  EXPECT_NEAR(s.error, 0.2, 1e-12);
  EXPECT_NEAR(s.weight, 5.0, 1e-6);
}

TEST(MonoConsistency, MatchesBruteForce) {
  const StftConfig cfg;
  const auto c = random_candidate(cfg, 7, 10);
  const auto mono = random_spectrogram(cfg, 7, 20);
  double acc = 0.0;
  for (int f = 0; f < mono.bins(); ++f)
    for (int u = 0; u < mono.frames(); ++u)
      acc += std::abs(std::abs((c.left.at(f, u) + c.right.at(f, u)) / 2.0) - std::abs(mono.at(f, u)));
  EXPECT_NEAR(mono_consistency(c, mono).error, acc / mono.size(), 1e-12);
  EXPECT_THROW(mono_consistency(c, random_spectrogram(cfg, 6, 1)), std::invalid_argument);
}

TEST(PhaseConsistency, SelfConsistentRotatedAndAntipodal) {
  const auto c0 = random_candidate(StftConfig{}, 5, 30);
  FusionCandidate c = c0;
  c.diff = c.implied_diff();
  const auto exact = phase_consistency(c, 1e-8);
  EXPECT_EQ(exact.error, 0.0);
  EXPECT_DOUBLE_EQ(exact.weight, 1e8);

  c.diff = rotate(c.implied_diff(), {0.0, 1.0});
  EXPECT_NEAR(phase_consistency(c).error, std::numbers::pi / 2, 1e-12);

  c.diff = rotate(c.implied_diff(), {-1.0, 0.0});
  EXPECT_NEAR(phase_consistency(c).error, std::numbers::pi, 1e-12);
}

TEST(WrapPhase, PrincipalInterval) {
  EXPECT_DOUBLE_EQ(wrap_phase(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(wrap_phase(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(wrap_phase(3 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_phase(0.5 + 4 * std::numbers::pi), 0.5, 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double a = d(rng);
    const double w = wrap_phase(a);
    ASSERT_GT(w, -std::numbers::pi);
    ASSERT_LE(w, std::numbers::pi);
    ASSERT_NEAR(std::remainder(a - w, 2 * std::numbers::pi), 0.0, 1e-9);
  }
}

TEST(ScoreCandidate, ProductAndPerfect) {
  const auto mono = random_spectrogram(StftConfig{}, 4, 40);
  // L - R = 0 and diff = 0 both have argument 0.
  const FusionCandidate perfect{mono, mono, ComplexSpectrogram(StftConfig{}, 4)};
  const auto s = score_candidate(perfect, mono, 1e-8);
  EXPECT_DOUBLE_EQ(s.w, 1e16);
  EXPECT_DOUBLE_EQ(s.w, s.w_mono * s.w_phase);

  const auto r = score_candidate(random_candidate(StftConfig{}, 4, 41), mono, 0.25);
  EXPECT_DOUBLE_EQ(r.w, r.w_mono * r.w_phase);
  EXPECT_DOUBLE_EQ(r.w_mono, 1.0 / (r.e_mono + 0.25));
  EXPECT_DOUBLE_EQ(r.w_phase, 1.0 / (r.e_phase + 0.25));
  EXPECT_GT(r.e_mono, 0.0);
  EXPECT_GT(r.e_phase, 0.0);
}

TEST(ScoreCandidate, DegradingMonoLowersWeight) {
  // Scaling both ears moves |(L + R) / 2| away from the mono magnitude but
  // keeps the phase of L - R, so only e_mono changes.
  const auto c = random_candidate(StftConfig{}, 4, 51);
  const auto mono = 0.5 * (c.left + c.right);
  double last_w = score_candidate(c, mono).w;
  const double e_phase = score_candidate(c, mono).e_phase;
  for (double scale : {1.1, 1.5, 2.0, 4.0}) {
    const FusionCandidate worse{scale * c.left, scale * c.right, c.diff};
    const auto s = score_candidate(worse, mono);
    EXPECT_NEAR(s.e_phase, e_phase, 1e-12);
    EXPECT_LT(s.w, last_w) << scale;
    last_w = s.w;
  }
}

TEST(NormalizeWeights, SumsToOneAndRejectsZero) {
  const std::vector<double> w{1.0, 3.0, 4.0};
  const auto n = normalize_weights(w);
  EXPECT_DOUBLE_EQ(n[0] + n[1] + n[2], 1.0);
  EXPECT_DOUBLE_EQ(n[2], 0.5);
  EXPECT_THROW(normalize_weights(std::vector<double>{0.0, 0.0}), NumericError);
}

TEST(FuseIntraSegment, SingleCandidate) {
  const auto c = random_candidate(StftConfig{}, 10, 60);
  const auto mono = random_spectrogram(StftConfig{}, 10, 61);
  const auto out = fuse_intra_segment(std::vector{c}, mono, 1440);
  ASSERT_EQ(out.weights.size(), 1u);
  EXPECT_EQ(out.weights[0], 1.0);
  EXPECT_EQ(out.left.samples, istft(c.left, 1440).samples);
  EXPECT_EQ(out.right.samples, istft(c.right, 1440).samples);
}

TEST(FuseIntraSegment, IdenticalCandidatesGiveThatCandidate) {
  const auto c = random_candidate(StftConfig{}, 10, 62);
  const auto mono = random_spectrogram(StftConfig{}, 10, 63);
  const auto out = fuse_intra_segment(std::vector{c, c, c}, mono, 1440);
  const auto ref = istft(c.left, 1440);
  for (std::size_t n = 0; n < ref.size(); ++n) ASSERT_NEAR(out.left.samples[n], ref.samples[n], 1e-12);
}

TEST(FuseIntraSegment, EmptyIsAnError) {
  try {
    fuse_intra_segment({}, ComplexSpectrogram(StftConfig{}, 2), 100);
    ADD_FAILURE();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no candidates");
  }
}

TEST(FuseIntraSegment, PerfectCandidateDominates) {
  const StftConfig cfg;
  const auto mono = stft(testing::random_wave(1600, 70));
  FusionCandidate perfect{mono, mono, ComplexSpectrogram(cfg, mono.frames())};
  // e_mono = 0 and L - R = 0 = diff, so w = 1 / eps^2.
  FusionCandidate bad = perfect;
  for (int f = 0; f < mono.bins(); ++f) {
    for (int u = 0; u < mono.frames(); ++u) {
      const auto m = mono.at(f, u);
      const auto dir = std::abs(m) > 0 ? m / std::abs(m) : std::complex<double>(1, 0);
      // |(L + R) / 2| = |m| + 0.2 and L - R = 2 j, diff = 2 -> e_phase = pi / 2
      bad.left.set(f, u, m + 0.2 * dir + std::complex<double>(0, 1));
      bad.right.set(f, u, m + 0.2 * dir - std::complex<double>(0, 1));
      bad.diff.set(f, u, {2.0, 0.0});
    }
  }
  const auto bs = score_candidate(bad, mono);
  ASSERT_NEAR(bs.e_phase, std::numbers::pi / 2, 1e-12);
  ASSERT_GT(bs.e_mono, 0.1);
  const auto out = fuse_intra_segment(std::vector{perfect, bad}, mono, 1600, 1e-8);
  const auto ref = istft(perfect.left, 1600);
  EXPECT_LT(testing::max_abs_diff(out.left.samples, ref.samples), 1e-3 * testing::l2(ref.samples));

  // Brute-force weight ratio.
  const double w_bad = 1.0 / (bs.e_mono + 1e-8) / (bs.e_phase + 1e-8);
  EXPECT_NEAR(out.weights[1], w_bad / (w_bad + 1e16), 1e-20);
}

TEST(FuseIntraSegment, SegmentCandidateMatchesWaveformByLinearity) {
  const StftConfig cfg;
  const auto mono = stft(testing::random_wave(4000, 80));
  std::vector<FusionCandidate> cands;
  for (int k = 0; k < 3; ++k) {
    cands.push_back({stft(testing::random_wave(4000, 81 + k)), stft(testing::random_wave(4000, 91 + k)),
                     random_spectrogram(cfg, mono.frames(), 100 + k)});
  }
  const auto out = fuse_intra_segment(cands, mono, 4000);
  const auto re = stft(out.left, cfg);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    err = std::max(err, std::abs(re.re_values()[i] - out.candidate.left.re_values()[i]));
    ref = std::max(ref, std::abs(out.candidate.left.re_values()[i]));
  }
  EXPECT_LT(err, 1e-5 * ref);
}

TEST(FuseIntraSegment, PermutationEquivariant) {
  const auto mono = random_spectrogram(StftConfig{}, 10, 110);
  std::vector<FusionCandidate> c{random_candidate(StftConfig{}, 10, 111),
                                 random_candidate(StftConfig{}, 10, 114),
                                 random_candidate(StftConfig{}, 10, 117)};
  const auto a = fuse_intra_segment(c, mono, 1440);
  std::vector<FusionCandidate> p{c[2], c[0], c[1]};
  const auto b = fuse_intra_segment(p, mono, 1440);
  EXPECT_DOUBLE_EQ(a.weights[0], b.weights[1]);
  EXPECT_DOUBLE_EQ(a.weights[2], b.weights[0]);
  for (std::size_t n = 0; n < a.left.size(); ++n) ASSERT_NEAR(a.left.samples[n], b.left.samples[n], 1e-12);
}

TEST(FuseIntraSegment, ConvexHullAndWeightSum) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mono = random_spectrogram(kToy, 9, rng());
    std::vector<FusionCandidate> c;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) c.push_back(random_candidate(kToy, 9, rng()));
    const auto out = fuse_intra_segment(c, mono, 16);
    double sum = 0.0;
    for (double w : out.weights) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t n = 0; n < 16; ++n) {
      double lo = 1e300, hi = -1e300;
      for (const auto& ci : c) {
        const double v = istft(ci.left, 16).samples[n];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ASSERT_GE(out.left.samples[n], lo - 1e-12);
      ASSERT_LE(out.left.samples[n], hi + 1e-12);
    }
  }
}

TEST(PlanSegments, DefaultGeometry) {
  const auto plan = plan_segments(160000, 10080, 800);
  EXPECT_EQ(plan.regular_count, 188u);
  EXPECT_EQ(plan.segments.size(), 189u);
  EXPECT_EQ(plan.segments.back(), (Interval{160000 - 10080, 160000}));
  // every sample in exactly one hop frame
  std::size_t next = 0;
  for (const auto& f : plan.hop_frames) {
    EXPECT_EQ(f.begin, next);
    next = f.end;
  }
  EXPECT_EQ(next, 160000u);
  for (std::size_t j = 12; j + 14 < plan.hop_frames.size(); ++j) {
    EXPECT_EQ(plan.coverage[j].size(), 13u) << j;
  }
  // coverage lists are exact
  for (std::size_t j = 0; j < plan.hop_frames.size(); ++j) {
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
      const bool overlaps = plan.segments[s].begin < plan.hop_frames[j].end &&
                            plan.hop_frames[j].begin < plan.segments[s].end;
      const bool listed = std::count(plan.coverage[j].begin(), plan.coverage[j].end(), s) == 1;
      ASSERT_EQ(overlaps, listed);
    }
  }
}

TEST(PlanSegments, EdgeCases) {
  const auto exact = plan_segments(10080, 10080, 800);
  ASSERT_EQ(exact.segments.size(), 1u);
  for (const auto& c : exact.coverage) EXPECT_EQ(c.size(), 1u);
  const auto shorter = plan_segments(5000, 10080, 800);
  ASSERT_EQ(shorter.segments.size(), 1u);
  EXPECT_EQ(shorter.segments[0], (Interval{0, 5000}));
  EXPECT_THROW(plan_segments(100, 10, 20), std::invalid_argument);
  EXPECT_THROW(plan_segments(100, 10, 0), std::invalid_argument);
}

TEST(PlanSegments, RandomPlansHopSpacedAndTiling) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t hop = 1 + rng() % 50;
    const std::size_t seg = hop + rng() % 200;
    const std::size_t total = 1 + rng() % 2000;
    const auto plan = plan_segments(total, seg, hop);
    for (std::size_t s = 0; s < plan.regular_count; ++s) {
      EXPECT_EQ(plan.segments[s].begin, s * hop);
    }
    std::size_t covered = 0;
    for (const auto& f : plan.hop_frames) covered += f.size();
    EXPECT_EQ(covered, total);
    EXPECT_EQ(plan.segments.back().end, total);
    for (const auto& c : plan.coverage) EXPECT_FALSE(c.empty());
  }
}

SegmentResult toy_segment(std::uint64_t seed, std::size_t len) {
  const auto mono = random_spectrogram(kToy, 1 + static_cast<int>(len / 2), seed);
  std::vector<FusionCandidate> c{random_candidate(kToy, mono.frames(), seed + 1),
                                 random_candidate(kToy, mono.frames(), seed + 4)};
  return {fuse_intra_segment(c, mono, len), mono};
}

TEST(FuseInterSegment, SingleSegmentPassesThrough) {
  const auto plan = plan_segments(8, 8, 4);
  const std::vector<SegmentResult> r{toy_segment(1, 8)};
  const auto [l, rr] = fuse_inter_segment(plan, r);
  for (std::size_t n = 0; n < 8; ++n) {
    EXPECT_NEAR(l.samples[n], r[0].fusion.left.samples[n], 1e-15);
    EXPECT_NEAR(rr.samples[n], r[0].fusion.right.samples[n], 1e-15);
  }
}

TEST(FuseInterSegment, ConsistentSegmentsReproduceTheSignal) {
  const auto plan = plan_segments(16, 8, 4);
  const auto global = testing::random_signal(16, 5);
  std::vector<SegmentResult> r{toy_segment(2, 8), toy_segment(3, 8), toy_segment(4, 8)};
  ASSERT_EQ(plan.segments.size(), r.size());
  // Every segment carries its own window of one global signal; scores differ.
  for (std::size_t k = 0; k < r.size(); ++k) {
    const auto b = plan.segments[k].begin;
    std::copy(global.begin() + b, global.begin() + b + 8, r[k].fusion.left.samples.begin());
  }
  const auto [l, _] = fuse_inter_segment(plan, r);
  for (std::size_t n = 0; n < 16; ++n) EXPECT_NEAR(l.samples[n], global[n], 1e-12) << n;
}

TEST(FuseInterSegment, MatchesNaiveOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t total = 16 + 2 * (rng() % 5);  // includes tail segments
    const auto mono = testing::random_signal(total, rng());
    const auto plan = plan_segments(total, 8, 4);
    std::vector<std::vector<FusionCandidate>> cands(plan.segments.size());
    std::vector<std::vector<testing::NaiveTriple>> naive(plan.segments.size());
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
      starts.push_back(plan.segments[s].begin);
      for (int k = 0; k < 2; ++k) {
        cands[s].push_back(random_candidate(kToy, 5, rng()));
        const auto& c = cands[s].back();
        naive[s].push_back({testing::cells_of(c.left), testing::cells_of(c.right), testing::cells_of(c.diff)});
      }
    }
    PipelineOptions opts;
    opts.stft = kToy;
    opts.seg_len = 8;
    opts.hop = 4;
    for (bool refine : {true, false}) {
      opts.refine = refine;
      const auto got = fuse_candidates(Waveform{mono, 16000}, cands, opts);
      const auto want = testing::naive_two_stage(mono, 8, starts, naive, kToy, opts.eps, !refine);
      for (std::size_t n = 0; n < total; ++n) {
        ASSERT_NEAR(got.left.samples[n], want.left[n], 1e-10) << n;
        ASSERT_NEAR(got.right.samples[n], want.right[n], 1e-10) << n;
      }
    }
  }
}

TEST(FuseInterSegment, SerialAndParallelKernelsAgree) {
  const auto plan = plan_segments(300, 40, 12);
  std::vector<std::vector<double>> sig;
  std::vector<std::span<const double>> spans;
  std::vector<double> w;
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    sig.push_back(testing::random_signal(plan.segments[s].size(), s));
    w.push_back(0.1 + s);
  }
  for (const auto& v : sig) spans.emplace_back(v);
  std::vector<double> a(300), b(300);
  kernels::serial::fuse_hop_frames(plan, w, spans, a);
  kernels::omp::fuse_hop_frames(plan, w, spans, b);
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace earshot
