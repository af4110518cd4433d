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

#include "earshot/visual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace earshot {

EncoderParams EncoderParams::init(const EncoderConfig& config, std::uint64_t seed) {
  ParamInit init(seed);
  const double limit = config.init_limit;
  const int patch_dim = config.image_channels * config.patch_size * config.patch_size;
  const int e = config.embed_dim;

  EncoderParams p;
  p.config = config;
  p.seed = seed;
  p.patch_embed = Dense::uniform(patch_dim, e, limit, init);
  p.query = Dense::uniform(e, e, limit, init);
  p.key = Dense::uniform(e, e, limit, init);
  p.value = Dense::uniform(e, e, limit, init);
  p.project = Dense::uniform(e, e, limit, init);
  for (ScoreHead* head : {&p.left_head, &p.right_head}) {
    head->weights = init.uniform(e, limit);
    head->bias = Grid2(config.grid_height, config.grid_width);
    auto b = init.uniform(head->bias.size(), limit);
    std::copy(b.begin(), b.end(), head->bias.values().begin());
  }
  p.descriptor_hidden = Dense::uniform(e, config.descriptor_hidden, limit, init);
  p.descriptor_out =
      Dense::uniform(config.descriptor_hidden, config.descriptor_dim, limit, init);
  return p;
}

void EncoderParams::validate() const {
  const int patch_dim = config.image_channels * config.patch_size * config.patch_size;
  const int e = config.embed_dim;
  for (const Dense* d : {&patch_embed, &query, &key, &value, &project,
                         &descriptor_hidden, &descriptor_out}) {
    d->validate();
  }
  if (patch_embed.in != patch_dim || patch_embed.out != e || query.in != e ||
      query.out != e || key.in != e || key.out != e || value.in != e ||
      value.out != e || project.in != e || descriptor_hidden.in != project.out ||
      descriptor_out.in != descriptor_hidden.out) {
    throw std::invalid_argument("encoder params: inconsistent shapes");
  }
  for (const ScoreHead* h : {&left_head, &right_head}) {
    if (static_cast<int>(h->weights.size()) != project.out) {
      throw std::invalid_argument("encoder params: score head width mismatch");
    }
  }
}

FeatureMap encode_frame(const FrameTensor& frame, const EncoderParams& params) {
  const EncoderConfig& cfg = params.config;
  const int p = cfg.patch_size;
  if (frame.channels() != cfg.image_channels || frame.height() <= 0 ||
      frame.width() <= 0 || frame.height() % p != 0 || frame.width() % p != 0) {
    throw std::invalid_argument("bad patch grid");
  }
  const int gh = frame.height() / p;
  const int gw = frame.width() / p;
  const int n = gh * gw;
  const int e = cfg.embed_dim;

  std::vector<std::vector<double>> tokens(n);
  std::vector<double> patch(static_cast<std::size_t>(cfg.image_channels) * p * p);
  for (int gy = 0; gy < gh; ++gy) {
    for (int gx = 0; gx < gw; ++gx) {
      std::size_t k = 0;
      for (int c = 0; c < cfg.image_channels; ++c) {
        for (int dy = 0; dy < p; ++dy) {
          for (int dx = 0; dx < p; ++dx) patch[k++] = frame(c, gy * p + dy, gx * p + dx);
        }
      }
      tokens[gy * gw + gx] = params.patch_embed.apply(patch);
    }
  }

  std::vector<std::vector<double>> q(n), k(n), val(n);
  for (int i = 0; i < n; ++i) {
    q[i] = params.query.apply(tokens[i]);
    k[i] = params.key.apply(tokens[i]);
    val[i] = params.value.apply(tokens[i]);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(e));

  FeatureMap v(params.project.out, gh, gw);
  std::vector<double> logits(n);
#pragma omp parallel for schedule(static) firstprivate(logits)
  for (int i = 0; i < n; ++i) {
    double peak = -INFINITY;
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < e; ++c) dot += q[i][c] * k[j][c];
      logits[j] = dot * scale;
      peak = std::max(peak, logits[j]);
    }
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      logits[j] = std::exp(logits[j] - peak);
      total += logits[j];
    }
    std::vector<double> mixed = tokens[i];
    for (int j = 0; j < n; ++j) {
      const double a = logits[j] / total;
      for (int c = 0; c < e; ++c) mixed[c] += a * val[j][c];
    }
    const auto out = params.project.apply(mixed);
    for (int c = 0; c < params.project.out; ++c) v(c, i / gw, i % gw) = out[c];
  }
  return v;
}

Grid2 head_scores(const FeatureMap& v, const ScoreHead& head) {
  if (static_cast<int>(head.weights.size()) != v.channels()) {
    throw std::invalid_argument("head_scores: channel mismatch");
  }
  const bool has_bias = head.bias.size() != 0;
  if (has_bias && (head.bias.height() != v.height() || head.bias.width() != v.width())) {
    throw std::invalid_argument("head_scores: grid mismatch");
  }
  Grid2 scores(v.height(), v.width());
  for (int y = 0; y < v.height(); ++y) {
    for (int x = 0; x < v.width(); ++x) {
      double acc = has_bias ? head.bias(y, x) : 0.0;
      for (int c = 0; c < v.channels(); ++c) acc += head.weights[c] * v(c, y, x);
      scores(y, x) = acc;
    }
  }
  return scores;
}

Grid2 softmax_map(const Grid2& scores) {
  Grid2 out(scores.height(), scores.width());
  if (scores.size() == 0) return out;
  const auto in = scores.values();
  const double peak = *std::max_element(in.begin(), in.end());
  double total = 0.0;
  auto dst = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    dst[i] = std::exp(in[i] - peak);
    total += dst[i];
  }
  for (double& d : dst) d /= total;
  return out;
}

AttentionPair dual_head_attention(const FeatureMap& v, const EncoderParams& params) {
  return {softmax_map(head_scores(v, params.left_head)),
          softmax_map(head_scores(v, params.right_head))};
}

std::pair<FeatureMap, FeatureMap> modulate_lr(const FeatureMap& v,
                                              const AttentionPair& attention) {
  const auto check = [&](const Grid2& a) {
    if (a.height() != v.height() || a.width() != v.width()) {
      throw std::invalid_argument("modulate_lr: shape mismatch");
    }
  };
  check(attention.left);
  check(attention.right);
  FeatureMap left(v.channels(), v.height(), v.width());
  FeatureMap right(v.channels(), v.height(), v.width());
  for (int c = 0; c < v.channels(); ++c) {
    for (int y = 0; y < v.height(); ++y) {
      for (int x = 0; x < v.width(); ++x) {
        left(c, y, x) = v(c, y, x) * attention.left(y, x);
        right(c, y, x) = v(c, y, x) * attention.right(y, x);
      }
    }
  }
  return {std::move(left), std::move(right)};
}

std::vector<double> pool_descriptor(const FeatureMap& v, const EncoderParams& params) {
  auto hidden = params.descriptor_hidden.apply(channel_means(v));
  leaky_relu_inplace(hidden);
  return params.descriptor_out.apply(hidden);
}

FrameTensor crop_frame(const FrameTensor& frame, int top, int left, int height,
                       int width) {
  if (top < 0 || left < 0 || height <= 0 || width <= 0 ||
      top + height > frame.height() || left + width > frame.width()) {
    throw std::invalid_argument("crop outside frame");
  }
  FrameTensor out(frame.channels(), height, width);
  for (int c = 0; c < frame.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) out(c, y, x) = frame(c, top + y, left + x);
    }
  }
  return out;
}

FrameTensor mirror_frame(const FrameTensor& frame) {
  FrameTensor out(frame.channels(), frame.height(), frame.width());
  const int w = frame.width();
  for (int c = 0; c < frame.channels(); ++c) {
    for (int y = 0; y < frame.height(); ++y) {
      for (int x = 0; x < w; ++x) out(c, y, x) = frame(c, y, w - 1 - x);
    }
  }
  return out;
}

}  // namespace earshot
