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

#include "earshot/audionet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace earshot {

RealSpectrogramStack stack_real_imag(const ComplexSpectrogram& spec) {
  RealSpectrogramStack out{Tensor3(2, spec.bins(), spec.frames()), spec.config(),
                           spec.sample_rate()};
  std::copy(spec.re_values().begin(), spec.re_values().end(),
            out.data.channel(0).begin());
  std::copy(spec.im_values().begin(), spec.im_values().end(),
            out.data.channel(1).begin());
  return out;
}

ComplexSpectrogram unstack_real_imag(const Tensor3& two_channel,
                                     const StftConfig& config, int sample_rate) {
  if (two_channel.channels() != 2 || two_channel.height() != config.bins()) {
    throw std::invalid_argument("unstack_real_imag: expected 2 x F x U");
  }
  ComplexSpectrogram out(config, two_channel.width(), sample_rate);
  std::copy(two_channel.channel(0).begin(), two_channel.channel(0).end(),
            out.re_values().begin());
  std::copy(two_channel.channel(1).begin(), two_channel.channel(1).end(),
            out.im_values().begin());
  return out;
}

Tensor3 film_modulate(const Tensor3& features, std::span<const double> descriptor,
                      const FilmGenerator& generator) {
  if (static_cast<int>(descriptor.size()) != generator.gamma.in ||
      static_cast<int>(descriptor.size()) != generator.beta.in) {
    throw std::invalid_argument("film_modulate: descriptor size mismatch");
  }
  if (generator.gamma.out != features.channels() ||
      generator.beta.out != features.channels()) {
    throw std::invalid_argument("film_modulate: channel mismatch");
  }
  const auto gamma = generator.gamma.apply(descriptor);
  const auto beta = generator.beta.apply(descriptor);
  Tensor3 out(features.channels(), features.height(), features.width());
  for (int c = 0; c < features.channels(); ++c) {
    auto src = features.channel(c);
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = gamma[c] * src[i] + beta[c];
  }
  return out;
}

namespace {

FilmGenerator make_film(int descriptor_dim, int channels, ParamInit& init) {
  const double limit = 1.0 / std::sqrt(static_cast<double>(descriptor_dim));
  FilmGenerator g;
  g.gamma = Dense::uniform(descriptor_dim, channels, limit, init);
  g.gamma.bias = init.constant(channels, 1.0);
  g.beta = Dense::uniform(descriptor_dim, channels, limit, init);
  g.beta.bias = init.constant(channels, 0.0);
  return g;
}

RefineHeadParams make_head(const NetConfig& c, int pyramid_channels, ParamInit& init) {
  RefineHeadParams h;
  h.side = Dense::uniform(c.feature_channels, c.side_dim,
                          1.0 / std::sqrt(static_cast<double>(c.feature_channels)), init);
  h.mix = Conv2d::init(pyramid_channels + c.side_dim, c.head_hidden, {1, 1}, init);
  h.out = Conv2d::init(c.head_hidden, 2, {3, 1}, init);
  return h;
}

int pyramid_channels(const NetConfig& c) { return c.widths[1] + 2 * c.widths[0]; }

Tensor3 activate(Tensor3 x) {
  leaky_relu_inplace(x.values());
  return x;
}

}  // namespace

NetParams NetParams::init(const NetConfig& config, std::uint64_t seed) {
  ParamInit init(seed);
  const auto& w = config.widths;
  NetParams p;
  p.config = config;
  p.seed = seed;
  p.down[0] = Conv2d::init(2, w[0], {3, 2}, init);
  p.down[1] = Conv2d::init(w[0], w[1], {3, 2}, init);
  p.down[2] = Conv2d::init(w[1], w[2], {3, 2}, init);
  p.up[0] = Conv2d::init(w[2] + w[1], w[1], {3, 1}, init);
  p.up[1] = Conv2d::init(w[1] + w[0], w[0], {3, 1}, init);
  p.up[2] = Conv2d::init(w[0] + 2, w[0], {3, 1}, init);
  p.film.stages = {make_film(config.descriptor_dim, w[1], init),
                   make_film(config.descriptor_dim, w[0], init),
                   make_film(config.descriptor_dim, w[0], init)};
  p.output = Conv2d::init(w[0], 2, {1, 1}, init);
  p.left_head = make_head(config, pyramid_channels(config), init);
  p.right_head = make_head(config, pyramid_channels(config), init);
  return p;
}

void NetParams::validate() const {
  const auto& w = config.widths;
  const std::array<std::pair<int, int>, 3> down_io{{{2, w[0]}, {w[0], w[1]}, {w[1], w[2]}}};
  const std::array<std::pair<int, int>, 3> up_io{
      {{w[2] + w[1], w[1]}, {w[1] + w[0], w[0]}, {w[0] + 2, w[0]}}};
  for (int i = 0; i < 3; ++i) {
    down[i].validate();
    up[i].validate();
    if (down[i].in != down_io[i].first || down[i].out != down_io[i].second ||
        up[i].in != up_io[i].first || up[i].out != up_io[i].second) {
      throw std::invalid_argument("net params: stage shape mismatch");
    }
  }
  if (film.stages.size() != 3) throw std::invalid_argument("net params: need 3 FiLM stages");
  for (int i = 0; i < 3; ++i) {
    film.stages[i].gamma.validate();
    film.stages[i].beta.validate();
    if (film.stages[i].gamma.out != up[i].out || film.stages[i].beta.out != up[i].out ||
        film.stages[i].gamma.in != config.descriptor_dim) {
      throw std::invalid_argument("net params: FiLM shape mismatch");
    }
  }
  output.validate();
  for (const RefineHeadParams* h : {&left_head, &right_head}) {
    h->side.validate();
    h->mix.validate();
    h->out.validate();
    if (h->side.in != config.feature_channels ||
        h->mix.in != pyramid_channels(config) + h->side.out || h->out.out != 2 ||
        h->out.in != h->mix.out) {
      throw std::invalid_argument("net params: head shape mismatch");
    }
  }
}

Tensor3 upsample_nearest(const Tensor3& x, int factor, int height, int width) {
  Tensor3 out(x.channels(), height, width);
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      const int sy = std::min(y / factor, x.height() - 1);
      for (int xx = 0; xx < width; ++xx) {
        out(c, y, xx) = x(c, sy, std::min(xx / factor, x.width() - 1));
      }
    }
  }
  return out;
}

UnetOutput unet_forward(const RealSpectrogramStack& x,
                        std::span<const double> descriptor, const NetParams& params) {
  const Tensor3& input = x.data;
  if (input.channels() != 2) throw std::invalid_argument("unet_forward: expected 2 channels");
  if (input.height() < 8 || input.width() < 8) {
    throw std::invalid_argument("spectrogram too small");
  }

  const Tensor3 e1 = activate(params.down[0].apply(input));
  const Tensor3 e2 = activate(params.down[1].apply(e1));
  const Tensor3 e3 = activate(params.down[2].apply(e2));

  const std::array<const Tensor3*, 3> skips{&e2, &e1, &input};
  FeaturePyramid pyramid{{}, x.config, x.sample_rate};
  const Tensor3* current = &e3;
  for (int stage = 0; stage < 3; ++stage) {
    const Tensor3& skip = *skips[stage];
    const std::array<Tensor3, 2> parts{
        upsample_nearest(*current, 2, skip.height(), skip.width()), skip};
    Tensor3 y = params.up[stage].apply(concat_channels(parts));
    y = film_modulate(y, descriptor, params.film.stages[stage]);
    pyramid.levels.push_back(activate(std::move(y)));
    current = &pyramid.levels.back();
  }

  const Tensor3 diff = params.output.apply(pyramid.levels.back());
  return {unstack_real_imag(diff, x.config, x.sample_rate), std::move(pyramid)};
}

namespace {

ComplexSpectrogram run_head(const FeaturePyramid& pyramid, const FeatureMap& side,
                            const RefineHeadParams& head) {
  const Tensor3& finest = pyramid.levels.back();
  const int h = finest.height();
  const int w = finest.width();
  std::vector<Tensor3> parts;
  const int levels = static_cast<int>(pyramid.levels.size());
  for (int i = 0; i < levels; ++i) {
    parts.push_back(upsample_nearest(pyramid.levels[i], 1 << (levels - 1 - i), h, w));
  }
  const auto projected = head.side.apply(channel_means(side));
  Tensor3 broadcast(static_cast<int>(projected.size()), h, w);
  for (int c = 0; c < broadcast.channels(); ++c) {
    std::fill(broadcast.channel(c).begin(), broadcast.channel(c).end(), projected[c]);
  }
  parts.push_back(std::move(broadcast));

  const Tensor3 hidden = activate(head.mix.apply(concat_channels(parts)));
  return unstack_real_imag(head.out.apply(hidden), pyramid.config, pyramid.sample_rate);
}

}  // namespace

std::pair<ComplexSpectrogram, ComplexSpectrogram> refine_heads(
    const FeaturePyramid& pyramid, const FeatureMap& v_left,
    const FeatureMap& v_right, const NetParams& params) {
  if (pyramid.levels.size() != 3) throw std::invalid_argument("refine_heads: need 3 pyramid levels");
  if (!v_left.same_shape(v_right) || v_left.channels() != params.config.feature_channels) {
    throw std::invalid_argument("refine_heads: side feature shape mismatch");
  }
  return {run_head(pyramid, v_left, params.left_head),
          run_head(pyramid, v_right, params.right_head)};
}

VisualConditioning condition_on_frame(const FrameTensor& frame,
                                      const EncoderParams& encoder) {
  const FeatureMap v = encode_frame(frame, encoder);
  VisualConditioning out;
  out.attention = dual_head_attention(v, encoder);
  auto [left, right] = modulate_lr(v, out.attention);
  out.left = std::move(left);
  out.right = std::move(right);
  out.descriptor = pool_descriptor(v, encoder);
  return out;
}

FusionCandidate generate_candidate(const ComplexSpectrogram& mono,
                                   const VisualConditioning& conditioning,
                                   const NetParams& net) {
  auto unet = unet_forward(stack_real_imag(mono), conditioning.descriptor, net);
  auto [left, right] =
      refine_heads(unet.pyramid, conditioning.left, conditioning.right, net);
  return {std::move(left), std::move(right), std::move(unet.diff)};
}

FusionCandidate spatialize_segment(const ComplexSpectrogram& mono,
                                   const FrameTensor& frame,
                                   const EncoderParams& encoder,
                                   const NetParams& net) {
  return generate_candidate(mono, condition_on_frame(frame, encoder), net);
}

}  // namespace earshot
