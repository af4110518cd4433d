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

#include "earshot/priors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace earshot {

namespace {

// 1 / (1 + exp(z)) without overflow for large |z|.
double falling_logistic(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

// Summing in ascending order makes the normaliser depend only on the
// multiset of values, so mirrored profiles normalise identically.
double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

TargetMap broadcast_profile(const std::vector<double>& profile, int height,
                            double eps) {
  const double total = std::max(height * sorted_sum(profile), eps);
  TargetMap map(height, static_cast<int>(profile.size()));
  for (int y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < profile.size(); ++x) {
      map(y, static_cast<int>(x)) = profile[x] / total;
    }
  }
  return map;
}

}  // namespace

PriorConfig PriorConfig::for_grid(int height, int width) {
  PriorConfig c;
  c.height = height;
  c.width = width;
  c.slope = 8.0 / width;
  c.center = (width + 1) / 2.0;
  return c;
}

void PriorConfig::validate() const {
  if (height < 1 || width < 1) throw std::invalid_argument("prior grid must be at least 1x1");
  if (!(slope > 0.0)) throw std::invalid_argument("prior slope must be positive");
  if (!(center >= 1.0 && center <= width)) {
    throw std::invalid_argument("prior centre must lie in [1, width]");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("prior eps must be positive");
}

PriorTargets logistic_targets(const PriorConfig& config) {
  config.validate();
  std::vector<double> left(config.width);
  std::vector<double> right(config.width);
  for (int i = 0; i < config.width; ++i) {
    const double offset = (i + 1) - config.center;
    left[i] = falling_logistic(config.slope * offset);
    right[i] = falling_logistic(-(config.slope * offset));
  }
  return {broadcast_profile(left, config.height, config.eps),
          broadcast_profile(right, config.height, config.eps)};
}

void AnnealSchedule::validate() const {
  if (!(lambda0 >= 0.0)) throw std::invalid_argument("lambda0 must be nonnegative");
  if (t_anneal < 1) throw std::invalid_argument("t_anneal must be at least 1");
}

double anneal_weight(long step, const AnnealSchedule& schedule) {
  schedule.validate();
  if (step < 0) throw std::invalid_argument("step must be nonnegative");
  const double ramp =
      1.0 - static_cast<double>(step) / static_cast<double>(schedule.t_anneal);
  return schedule.lambda0 * std::max(0.0, ramp);
}

double map_mse(const Grid2& a, const Grid2& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("map_mse: shape mismatch");
  if (a.size() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double prior_bracket(const Grid2& attn_left, const Grid2& attn_right,
                     const PriorTargets& targets) {
  if (!attn_left.same_shape(attn_right) || !attn_left.same_shape(targets.left) ||
      !attn_left.same_shape(targets.right)) {
    throw std::invalid_argument("prior_loss: shape mismatch");
  }
  return map_mse(attn_left, targets.left) + map_mse(attn_right, targets.right);
}

double prior_loss(const Grid2& attn_left, const Grid2& attn_right,
                  const PriorTargets& targets, double lambda_t) {
  const double bracket = prior_bracket(attn_left, attn_right, targets);
  return lambda_t == 0.0 ? 0.0 : lambda_t * bracket;
}

}  // namespace earshot
