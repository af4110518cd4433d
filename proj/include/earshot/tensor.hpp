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

#ifndef EARSHOT_TENSOR_HPP_
#define EARSHOT_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace earshot {

/// Dense row-major H x W grid of doubles. Used for attention maps, prior
/// targets and score maps.
class Grid2 {
 public:
  Grid2() = default;
  Grid2(int height, int width, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int y, int x) { return values_[index(y, x)]; }
  double operator()(int y, int x) const { return values_[index(y, x)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const Grid2& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  double sum() const;

  friend bool operator==(const Grid2&, const Grid2&) = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// Dense C x H x W tensor of doubles, channel-major.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int channels, int height, int width, double fill = 0.0);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t size() const { return values_.size(); }

  double& operator()(int c, int y, int x) { return values_[index(c, y, x)]; }
  double operator()(int c, int y, int x) const {
    return values_[index(c, y, x)];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> channel(int c) {
    return std::span<double>(values_).subspan(c * plane(), plane());
  }
  std::span<const double> channel(int c) const {
    return std::span<const double>(values_).subspan(c * plane(), plane());
  }

  bool same_shape(const Tensor3& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }
  bool all_finite() const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// Concatenate along the channel axis. All inputs must share H x W.
Tensor3 concat_channels(std::span<const Tensor3> parts);

}  // namespace earshot

#endif  // EARSHOT_TENSOR_HPP_
