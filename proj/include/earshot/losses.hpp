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

#ifndef EARSHOT_LOSSES_HPP_
#define EARSHOT_LOSSES_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "earshot/priors.hpp"
#include "earshot/spectral.hpp"
#include "earshot/visual.hpp"

namespace earshot {

/// Frobenius norm of the complex difference, sqrt(sum |pred - target|^2).
double loss_d(const ComplexSpectrogram& pred, const ComplexSpectrogram& target);

/// loss_d(right) + loss_d(left).
double loss_rl(const ComplexSpectrogram& pred_left,
               const ComplexSpectrogram& pred_right,
               const ComplexSpectrogram& target_left,
               const ComplexSpectrogram& target_right);

struct LossWeights {
  double lambda_rl = 5.0;
  AnnealSchedule anneal{2.0, 1};

  void validate() const;
};

struct LossParts {
  double diff = 0.0;         // L_D
  double channels = 0.0;     // L_RL
  double prior_raw = 0.0;    // unweighted prior bracket
};

/// L_D + lambda_rl * L_RL + anneal_weight(step) * prior_raw.
double total_loss(const LossParts& parts, const LossWeights& weights, long step);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h. Coordinates are
/// evaluated in parallel, so `f` must be safe to call concurrently. Throws
/// NumericError if any evaluation is non-finite.
std::vector<double> finite_diff_grad(const ScalarFunction& f,
                                     std::span<const double> point, double step);

// Head-score parameters, flattened as
// [left weights, left bias, right weights, right bias].
std::vector<double> flatten_heads(const EncoderParams& params);
void unflatten_heads(std::span<const double> flat, EncoderParams& params);

/// Attention maps produced by the score heads on precomputed features.
AttentionPair attention_from_heads(const FeatureMap& v, const EncoderParams& params);

/// Prior loss on `v` as a function of the flattened head parameters.
double prior_loss_of_heads(const FeatureMap& v, std::span<const double> heads,
                           const EncoderParams& params, const PriorTargets& targets,
                           double lambda_t);

/// Analytic gradient of prior_loss_of_heads with respect to the flattened
/// head parameters (softmax / mean-squared-error chain rule).
std::vector<double> prior_loss_gradient(const FeatureMap& v,
                                        const EncoderParams& params,
                                        const PriorTargets& targets, double lambda_t);

struct DemoRecord {
  long step = 0;
  double loss = 0.0;       // lambda_t * bracket, mean over scenes
  double lambda_t = 0.0;
  double left_mass = 0.0;  // attention_left mass on the left half, mean over scenes
};

struct DemoResult {
  EncoderParams params;
  std::vector<DemoRecord> trace;                // steps + 1 records
  std::vector<std::vector<double>> trajectory;  // flattened heads, steps + 1
};

struct DemoOptions {
  long steps = 500;
  double learning_rate = 3.0e6;
  AnnealSchedule schedule{2.0, 125};
  double fd_step = 1e-5;
};

/// Gradient descent on the prior loss over the head-score parameters only,
/// with finite-difference gradients. The encoder trunk stays frozen. Throws
/// NumericError("demo diverged; reduce lr") on a non-finite loss.
DemoResult train_prior_demo(std::span<const FrameTensor> scenes,
                            const PriorConfig& prior, const DemoOptions& options,
                            std::uint64_t seed);

/// Sum of attention mass in the columns strictly left of the grid centre.
double left_half_mass(const Grid2& attention);

}  // namespace earshot

#endif  // EARSHOT_LOSSES_HPP_
