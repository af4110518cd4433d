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

#include "earshot/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "earshot/errors.hpp"

namespace earshot {

double loss_d(const ComplexSpectrogram& pred, const ComplexSpectrogram& target) {
  require_same_shape(pred, target, "loss_d");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dr = pred.re_values()[i] - target.re_values()[i];
    const double di = pred.im_values()[i] - target.im_values()[i];
    acc += dr * dr + di * di;
  }
  return std::sqrt(acc);
}

double loss_rl(const ComplexSpectrogram& pred_left, const ComplexSpectrogram& pred_right,
               const ComplexSpectrogram& target_left,
               const ComplexSpectrogram& target_right) {
  return loss_d(pred_right, target_right) + loss_d(pred_left, target_left);
}

void LossWeights::validate() const {
  if (!(lambda_rl >= 0.0)) throw std::invalid_argument("lambda_rl must be nonnegative");
  anneal.validate();
}

double total_loss(const LossParts& parts, const LossWeights& weights, long step) {
  weights.validate();
  const double lambda_t = anneal_weight(step, weights.anneal);
  const double prior = lambda_t == 0.0 ? 0.0 : lambda_t * parts.prior_raw;
  return parts.diff + weights.lambda_rl * parts.channels + prior;
}

std::vector<double> finite_diff_grad(const ScalarFunction& f,
                                     std::span<const double> point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  const long n = static_cast<long>(point.size());
  std::vector<double> grad(n);
  bool finite = true;
#pragma omp parallel
  {
    std::vector<double> probe(point.begin(), point.end());
#pragma omp for schedule(static) reduction(&& : finite)
    for (long i = 0; i < n; ++i) {
      const double original = probe[i];
      probe[i] = original + step;
      const double up = f(probe);
      probe[i] = original - step;
      const double down = f(probe);
      probe[i] = original;
      finite = finite && std::isfinite(up) && std::isfinite(down);
      grad[i] = (up - down) / (2.0 * step);
    }
  }
  if (!finite) throw NumericError("non-finite function value in finite differences");
  return grad;
}

namespace {

struct HeadView {
  std::span<const double> weights;
  std::span<const double> bias;
};

// Views into the flattened [left w, left b, right w, right b] layout.
std::pair<HeadView, HeadView> split_heads(std::span<const double> flat, int channels,
                                          std::size_t cells) {
  const std::size_t per_head = channels + cells;
  if (flat.size() != 2 * per_head) throw std::invalid_argument("flattened head size mismatch");
  return {{flat.subspan(0, channels), flat.subspan(channels, cells)},
          {flat.subspan(per_head, channels), flat.subspan(per_head + channels, cells)}};
}

Grid2 softmax_scores(const FeatureMap& v, const HeadView& head) {
  Grid2 scores(v.height(), v.width());
  const std::size_t cells = scores.size();
  if (head.bias.size() != cells) throw std::invalid_argument("score bias does not match the feature grid");
  const auto s = scores.values();
  for (std::size_t j = 0; j < cells; ++j) s[j] = head.bias[j];
  for (int c = 0; c < v.channels(); ++c) {
    const double w = head.weights[c];
    const auto plane = v.channel(c);
    for (std::size_t j = 0; j < cells; ++j) s[j] += w * plane[j];
  }
  return softmax_map(scores);
}

std::size_t cells_of(const EncoderParams& params) { return params.left_head.bias.size(); }

}  // namespace

std::vector<double> flatten_heads(const EncoderParams& params) {
  std::vector<double> flat;
  for (const ScoreHead* h : {&params.left_head, &params.right_head}) {
    flat.insert(flat.end(), h->weights.begin(), h->weights.end());
    flat.insert(flat.end(), h->bias.values().begin(), h->bias.values().end());
  }
  return flat;
}

void unflatten_heads(std::span<const double> flat, EncoderParams& params) {
  const int channels = static_cast<int>(params.left_head.weights.size());
  const auto [left, right] = split_heads(flat, channels, cells_of(params));
  params.left_head.weights.assign(left.weights.begin(), left.weights.end());
  std::copy(left.bias.begin(), left.bias.end(), params.left_head.bias.values().begin());
  params.right_head.weights.assign(right.weights.begin(), right.weights.end());
  std::copy(right.bias.begin(), right.bias.end(), params.right_head.bias.values().begin());
}

AttentionPair attention_from_heads(const FeatureMap& v, const EncoderParams& params) {
  return dual_head_attention(v, params);
}

double prior_loss_of_heads(const FeatureMap& v, std::span<const double> heads,
                           const EncoderParams& params, const PriorTargets& targets,
                           double lambda_t) {
  const auto [left, right] = split_heads(heads, v.channels(), cells_of(params));
  return prior_loss(softmax_scores(v, left), softmax_scores(v, right), targets, lambda_t);
}

std::vector<double> prior_loss_gradient(const FeatureMap& v, const EncoderParams& params,
                                        const PriorTargets& targets, double lambda_t) {
  const auto flat = flatten_heads(params);
  const int channels = v.channels();
  const std::size_t cells = cells_of(params);
  const auto [left, right] = split_heads(flat, channels, cells);

  std::vector<double> grad(flat.size(), 0.0);
  const std::size_t per_head = channels + cells;
  const std::array<std::pair<HeadView, const TargetMap*>, 2> heads{
      {{left, &targets.left}, {right, &targets.right}}};
  for (std::size_t h = 0; h < 2; ++h) {
    const Grid2 attn = softmax_scores(v, heads[h].first);
    const auto a = attn.values();
    const auto t = heads[h].second->values();
    if (t.size() != cells) throw std::invalid_argument("prior target does not match the feature grid");
    // d/ds_j of (lambda / N) sum_i (a_i - t_i)^2 through the softmax.
    double inner = 0.0;
    for (std::size_t i = 0; i < cells; ++i) inner += a[i] * (a[i] - t[i]);
    const double scale = 2.0 * lambda_t / static_cast<double>(cells);
    std::vector<double> ds(cells);
    for (std::size_t j = 0; j < cells; ++j) ds[j] = scale * a[j] * ((a[j] - t[j]) - inner);

    double* g = grad.data() + h * per_head;
    for (int c = 0; c < channels; ++c) {
      const auto plane = v.channel(c);
      double acc = 0.0;
      for (std::size_t j = 0; j < cells; ++j) acc += ds[j] * plane[j];
      g[c] = acc;
    }
    std::copy(ds.begin(), ds.end(), g + channels);
  }
  return grad;
}

double left_half_mass(const Grid2& attention) {
  double mass = 0.0;
  const int half = attention.width() / 2;
  for (int y = 0; y < attention.height(); ++y) {
    for (int x = 0; x < half; ++x) mass += attention(y, x);
  }
  return mass;
}

DemoResult train_prior_demo(std::span<const FrameTensor> scenes, const PriorConfig& prior,
                            const DemoOptions& options, std::uint64_t seed) {
  if (scenes.empty()) throw std::invalid_argument("demo needs at least one scene");
  if (options.steps < 1) throw std::invalid_argument("demo needs at least one step");
  options.schedule.validate();

  EncoderConfig config;
  config.grid_height = prior.height;
  config.grid_width = prior.width;
  DemoResult result{EncoderParams::init(config, seed), {}, {}};
  const PriorTargets targets = logistic_targets(prior);

  std::vector<FeatureMap> features;
  for (const auto& frame : scenes) {
    features.push_back(encode_frame(frame, result.params));
    if (features.back().height() != prior.height || features.back().width() != prior.width) {
      throw std::invalid_argument("demo scenes do not match the prior grid");
    }
  }
  const double scene_count = static_cast<double>(features.size());

  auto objective = [&](std::span<const double> heads, double lambda_t) {
    double total = 0.0;
    for (const auto& v : features) {
      total += prior_loss_of_heads(v, heads, result.params, targets, lambda_t);
    }
    return total / scene_count;
  };
  auto record = [&](long step, std::span<const double> heads) {
    EncoderParams snapshot = result.params;
    unflatten_heads(heads, snapshot);
    DemoRecord r;
    r.step = step;
    r.lambda_t = anneal_weight(step, options.schedule);
    r.loss = objective(heads, r.lambda_t);
    for (const auto& v : features) {
      r.left_mass += left_half_mass(attention_from_heads(v, snapshot).left);
    }
    r.left_mass /= scene_count;
    const bool finite_heads =
        std::all_of(heads.begin(), heads.end(), [](double h) { return std::isfinite(h); });
    if (!std::isfinite(r.loss) || !std::isfinite(r.left_mass) || !finite_heads) {
      throw NumericError("demo diverged; reduce lr");
    }
    result.trace.push_back(r);
    result.trajectory.emplace_back(heads.begin(), heads.end());
  };

  std::vector<double> heads = flatten_heads(result.params);
  record(0, heads);
  for (long step = 0; step < options.steps; ++step) {
    const double lambda_t = anneal_weight(step, options.schedule);
    // zero objective once annealed: no update
    if (lambda_t != 0.0) {
      const auto grad = finite_diff_grad(
          [&](std::span<const double> p) { return objective(p, lambda_t); }, heads,
          options.fd_step);
      for (std::size_t i = 0; i < heads.size(); ++i) {
        heads[i] -= options.learning_rate * grad[i];
      }
    }
    record(step + 1, heads);
  }
  unflatten_heads(heads, result.params);
  return result;
}

}  // namespace earshot
