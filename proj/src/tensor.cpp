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

#include "earshot/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace earshot {

Grid2::Grid2(int height, int width, double fill)
    : height_(height), width_(width) {
  if (height < 0 || width < 0) throw std::invalid_argument("negative grid size");
  values_.assign(static_cast<std::size_t>(height) * width, fill);
}

double Grid2::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

Tensor3::Tensor3(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0) {
    throw std::invalid_argument("negative tensor size");
  }
  values_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

bool Tensor3::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor3 concat_channels(std::span<const Tensor3> parts) {
  if (parts.empty()) return {};
  const int h = parts.front().height();
  const int w = parts.front().width();
  int total = 0;
  for (const auto& p : parts) {
    if (p.height() != h || p.width() != w) {
      throw std::invalid_argument("concat_channels: spatial size mismatch");
    }
    total += p.channels();
  }
  Tensor3 out(total, h, w);
  auto dst = out.values().begin();
  for (const auto& p : parts) {
    dst = std::copy(p.values().begin(), p.values().end(), dst);
  }
  return out;
}

}  // namespace earshot
