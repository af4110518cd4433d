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

#ifndef EARSHOT_VISUAL_HPP_
#define EARSHOT_VISUAL_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "earshot/layers.hpp"
#include "earshot/tensor.hpp"

namespace earshot {

/// Image, C x H x W, values nominally in [0, 1].
struct FrameTensor : Tensor3 {
  using Tensor3::Tensor3;
  FrameTensor() = default;
  explicit FrameTensor(Tensor3 t) : Tensor3(std::move(t)) {}
};

/// Spatial feature map on the patch grid, C x H x W.
struct FeatureMap : Tensor3 {
  using Tensor3::Tensor3;
  FeatureMap() = default;
  explicit FeatureMap(Tensor3 t) : Tensor3(std::move(t)) {}
};

/// Left and right spatial attention, each nonnegative with unit sum.
struct AttentionPair {
  Grid2 left;
  Grid2 right;
};

struct EncoderConfig {
  int image_channels = 3;
  int patch_size = 16;
  int embed_dim = 32;
  int grid_height = 14;  // patch rows the score heads are sized for
  int grid_width = 28;
  int descriptor_hidden = 32;
  int descriptor_dim = 16;
  double init_limit = 0.05;
};

/// Per-cell attention score: weights . v(:, h, w) + bias(h, w). The bias is
/// a learned positional term on the patch grid.
struct ScoreHead {
  std::vector<double> weights;  // feature channels
  Grid2 bias;                   // grid_height x grid_width
};

struct EncoderParams {
  EncoderConfig config;
  std::uint64_t seed = 0;
  Dense patch_embed;  // (C_img * p * p) -> embed
  Dense query;
  Dense key;
  Dense value;
  Dense project;  // mixed tokens -> feature channels
  ScoreHead left_head;
  ScoreHead right_head;
  Dense descriptor_hidden;
  Dense descriptor_out;

  /// Uniform(-limit, limit) initialisation from `seed`.
  static EncoderParams init(const EncoderConfig& config, std::uint64_t seed);
  void validate() const;
};

/// Patch embedding followed by one residual self-attention mixing block.
/// Throws std::invalid_argument("bad patch grid") unless both image sides
/// are multiples of the patch size.
FeatureMap encode_frame(const FrameTensor& frame, const EncoderParams& params);

/// Raw per-cell scores of one head.
Grid2 head_scores(const FeatureMap& v, const ScoreHead& head);

/// Softmax over all cells of the grid.
Grid2 softmax_map(const Grid2& scores);

AttentionPair dual_head_attention(const FeatureMap& v,
                                  const EncoderParams& params);

/// v scaled cell-wise by each attention map, broadcast over channels.
std::pair<FeatureMap, FeatureMap> modulate_lr(const FeatureMap& v,
                                              const AttentionPair& attention);

/// Global average pool followed by a two-layer MLP.
std::vector<double> pool_descriptor(const FeatureMap& v,
                                    const EncoderParams& params);

/// Rectangular window of a frame.
FrameTensor crop_frame(const FrameTensor& frame, int top, int left, int height,
                       int width);

/// Left-right mirror image.
FrameTensor mirror_frame(const FrameTensor& frame);

}  // namespace earshot

#endif  // EARSHOT_VISUAL_HPP_
