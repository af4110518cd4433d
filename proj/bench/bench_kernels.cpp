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

// Serial reference vs OpenMP kernels at full-size shapes.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "earshot/kernels.hpp"
#include "earshot/refine.hpp"
#include "earshot/spectral.hpp"

namespace {

using namespace earshot;

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <bool Parallel>
void BM_StftFrames(benchmark::State& state) {
  const StftConfig cfg;
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  const int frames = cfg.frame_count(len);
  std::vector<double> padded(len + 2 * cfg.pad() + cfg.window_len, 0.0);
  const auto x = noise(len, 1);
  std::copy(x.begin(), x.end(), padded.begin() + cfg.pad());
  const auto window = analysis_window(cfg);
  ComplexSpectrogram out(cfg, frames);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::stft_frames(padded, window, out);
    else kernels::serial::stft_frames(padded, window, out);
    benchmark::DoNotOptimize(out.re_values().data());
  }
  state.SetItemsProcessed(state.iterations() * frames);
}

template <bool Parallel>
void BM_OverlapAdd(benchmark::State& state) {
  const StftConfig cfg;
  const int frames = static_cast<int>(state.range(0));
  ComplexSpectrogram spec(cfg, frames);
  const auto re = noise(spec.size(), 2), im = noise(spec.size(), 3);
  std::copy(re.begin(), re.end(), spec.re_values().begin());
  std::copy(im.begin(), im.end(), spec.im_values().begin());
  const auto window = analysis_window(cfg);
  std::vector<double> out(static_cast<std::size_t>(frames - 1) * cfg.hop_len + cfg.window_len);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::overlap_add(spec, window, out);
    else kernels::serial::overlap_add(spec, window, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * frames);
}

template <bool Parallel>
void BM_Conv2d(benchmark::State& state) {
  // First encoder layer of the audio network: 2 -> 16 channels on 257 x 64.
  const int cin = 2, cout = static_cast<int>(state.range(0));
  const kernels::ConvShape shape{3, 1};
  Tensor3 in(cin, 257, 64);
  const auto v = noise(in.size(), 4);
  std::copy(v.begin(), v.end(), in.values().begin());
  const auto w = noise(static_cast<std::size_t>(cout) * cin * 9, 5);
  const auto b = noise(cout, 6);
  Tensor3 out(cout, kernels::conv_output_size(257, shape), kernels::conv_output_size(64, shape));
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::conv2d(in, w, b, shape, out);
    else kernels::serial::conv2d(in, w, b, shape, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <bool Parallel>
void BM_FuseHopFrames(benchmark::State& state) {
  const std::size_t total = static_cast<std::size_t>(state.range(0));
  const auto plan = plan_segments(total, 10080, 800);
  std::vector<std::vector<double>> sig;
  std::vector<std::span<const double>> spans;
  std::vector<double> weights;
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    sig.push_back(noise(plan.segments[s].size(), 10 + s));
    weights.push_back(1.0 + 0.01 * s);
  }
  for (const auto& s : sig) spans.emplace_back(s);
  std::vector<double> out(total);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::omp::fuse_hop_frames(plan, weights, spans, out);
    else kernels::serial::fuse_hop_frames(plan, weights, spans, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(total));
}

BENCHMARK(BM_StftFrames<false>)->Name("stft_frames/serial")->Arg(10080)->Arg(160000);
BENCHMARK(BM_StftFrames<true>)->Name("stft_frames/omp")->Arg(10080)->Arg(160000);
BENCHMARK(BM_OverlapAdd<false>)->Name("overlap_add/serial")->Arg(64)->Arg(1001);
BENCHMARK(BM_OverlapAdd<true>)->Name("overlap_add/omp")->Arg(64)->Arg(1001);
BENCHMARK(BM_Conv2d<false>)->Name("conv2d/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_Conv2d<true>)->Name("conv2d/omp")->Arg(16)->Arg(32);
BENCHMARK(BM_FuseHopFrames<false>)->Name("fuse_hop_frames/serial")->Arg(160000);
BENCHMARK(BM_FuseHopFrames<true>)->Name("fuse_hop_frames/omp")->Arg(160000);

}  // namespace

BENCHMARK_MAIN();
