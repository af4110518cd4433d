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

#ifndef EARSHOT_CONFIG_HPP_
#define EARSHOT_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "earshot/refine.hpp"
#include "earshot/spectral.hpp"

namespace earshot {

/// Run-wide settings. Text form is one `key=value` per line; `#` starts a
/// comment. Recognised keys: sample_rate, window, hop, fft, seg_len,
/// infer_hop, k_crops, lambda_rl, lambda0, eps.
struct RunConfig {
  int sample_rate = kDefaultSampleRate;
  StftConfig stft;
  std::size_t seg_len = 10080;
  std::size_t infer_hop = 800;
  int k_crops = 3;
  double lambda_rl = 5.0;
  double lambda0 = 2.0;
  double eps = kDefaultFusionEps;

  void validate() const;
  /// Applies one assignment. Throws std::invalid_argument on an unknown key
  /// or unparsable value.
  void set(const std::string& key, const std::string& value);
};

/// Applies every assignment in `in` on top of `base`.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace earshot

#endif  // EARSHOT_CONFIG_HPP_
