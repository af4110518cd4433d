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

#include "earshot/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace earshot {

void leaky_relu_inplace(std::span<double> values) {
  for (double& v : values) v = leaky_relu(v);
}

std::vector<double> ParamInit::uniform(std::size_t n, double limit) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<double> out(n);
  for (double& v : out) v = static_cast<float>(dist(engine_));
  return out;
}

Dense Dense::uniform(int in, int out, double limit, ParamInit& init) {
  Dense d;
  d.in = in;
  d.out = out;
  d.weights = init.uniform(static_cast<std::size_t>(in) * out, limit);
  d.bias = init.uniform(out, limit);
  return d;
}

std::vector<double> Dense::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != in) {
    throw std::invalid_argument("dense layer: input size mismatch");
  }
  std::vector<double> y(out);
  for (int o = 0; o < out; ++o) {
    double acc = bias[o];
    const double* row = weights.data() + static_cast<std::size_t>(o) * in;
    for (int i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
  return y;
}

void Dense::validate() const {
  if (in < 0 || out < 0 ||
      weights.size() != static_cast<std::size_t>(in) * out ||
      bias.size() != static_cast<std::size_t>(out)) {
    throw std::invalid_argument("dense layer: inconsistent parameter shapes");
  }
}

Conv2d Conv2d::init(int in, int out, kernels::ConvShape shape, ParamInit& init) {
  Conv2d c;
  c.in = in;
  c.out = out;
  c.shape = shape;
  const double fan_in = static_cast<double>(in) * shape.kernel * shape.kernel;
  c.weights = init.uniform(static_cast<std::size_t>(out) * in * shape.kernel *
                               shape.kernel,
                           1.0 / std::sqrt(fan_in));
  c.bias = init.constant(out, 0.0);
  return c;
}

Tensor3 Conv2d::apply(const Tensor3& x) const {
  if (x.channels() != in) throw std::invalid_argument("conv2d: channel mismatch");
  Tensor3 y(out, kernels::conv_output_size(x.height(), shape),
            kernels::conv_output_size(x.width(), shape));
  kernels::omp::conv2d(x, weights, bias, shape, y);
  return y;
}

void Conv2d::validate() const {
  const std::size_t k = shape.kernel;
  if (weights.size() != static_cast<std::size_t>(out) * in * k * k ||
      bias.size() != static_cast<std::size_t>(out) || shape.stride < 1 ||
      shape.kernel < 1) {
    throw std::invalid_argument("conv2d: inconsistent parameter shapes");
  }
}

std::vector<double> channel_means(const Tensor3& x) {
  std::vector<double> means(x.channels(), 0.0);
  if (x.plane() == 0) return means;
  for (int c = 0; c < x.channels(); ++c) {
    double acc = 0.0;
    for (double v : x.channel(c)) acc += v;
    means[c] = acc / static_cast<double>(x.plane());
  }
  return means;
}

}  // namespace earshot
