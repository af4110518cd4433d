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

#ifndef EARSHOT_LAYERS_HPP_
#define EARSHOT_LAYERS_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "earshot/kernels.hpp"
#include "earshot/tensor.hpp"

namespace earshot {

inline constexpr double kLeakySlope = 0.2;

inline double leaky_relu(double x) { return x >= 0.0 ? x : kLeakySlope * x; }
void leaky_relu_inplace(std::span<double> values);

/// Seeded source of initial parameter values. Draws are rounded to float so
/// that parameters survive the float32 tensor container bit-exactly.
class ParamInit {
 public:
  explicit ParamInit(std::uint64_t seed) : engine_(seed) {}

  std::vector<double> uniform(std::size_t n, double limit);
  std::vector<double> constant(std::size_t n, double value) const {
    return std::vector<double>(n, value);
  }

 private:
  std::mt19937_64 engine_;
};

/// y = W x + b with W stored row-major (out x in).
struct Dense {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static Dense uniform(int in, int out, double limit, ParamInit& init);
  std::vector<double> apply(std::span<const double> x) const;
  void validate() const;
};

/// Square-kernel 2-D convolution with zero padding kernel / 2.
struct Conv2d {
  int in = 0;
  int out = 0;
  kernels::ConvShape shape;
  std::vector<double> weights;  // out x in x k x k
  std::vector<double> bias;

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero bias.
  static Conv2d init(int in, int out, kernels::ConvShape shape, ParamInit& init);
  Tensor3 apply(const Tensor3& x) const;
  void validate() const;
};

/// Spatial mean of every channel.
std::vector<double> channel_means(const Tensor3& x);

}  // namespace earshot

#endif  // EARSHOT_LAYERS_HPP_
