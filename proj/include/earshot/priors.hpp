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

#ifndef EARSHOT_PRIORS_HPP_
#define EARSHOT_PRIORS_HPP_

#include <utility>

#include "earshot/tensor.hpp"

namespace earshot {

/// Logistic left/right ramp over the columns x = 1..width of an
/// height x width grid.
struct PriorConfig {
  int height = 14;
  int width = 28;
  double slope = 8.0 / 28.0;  // q
  double center = 14.5;       // x0, in column units
  double eps = 1e-12;

  /// slope 8 / width, centre (width + 1) / 2.
  static PriorConfig for_grid(int height, int width);
  void validate() const;
};

/// Nonnegative map summing to one.
using TargetMap = Grid2;

struct PriorTargets {
  TargetMap left;
  TargetMap right;
};

/// left  proportional to 1 / (1 + exp( q (x - x0)))
/// right proportional to 1 / (1 + exp(-q (x - x0)))
/// Both are constant down each column and normalised to unit sum.
PriorTargets logistic_targets(const PriorConfig& config);

struct AnnealSchedule {
  double lambda0 = 2.0;
  long t_anneal = 1;

  void validate() const;
};

/// lambda0 * max(0, 1 - t / t_anneal).
double anneal_weight(long step, const AnnealSchedule& schedule);

/// Mean of squared per-cell differences.
double map_mse(const Grid2& a, const Grid2& b);

/// MSE(attn_left, W_L) + MSE(attn_right, W_R), without any weight.
double prior_bracket(const Grid2& attn_left, const Grid2& attn_right,
                     const PriorTargets& targets);

/// lambda_t times the bracket above.
double prior_loss(const Grid2& attn_left, const Grid2& attn_right,
                  const PriorTargets& targets, double lambda_t);

}  // namespace earshot

#endif  // EARSHOT_PRIORS_HPP_
