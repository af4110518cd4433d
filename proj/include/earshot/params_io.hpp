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

#ifndef EARSHOT_PARAMS_IO_HPP_
#define EARSHOT_PARAMS_IO_HPP_

#include <cstdint>
#include <filesystem>

#include "earshot/audionet.hpp"
#include "earshot/visual.hpp"

namespace earshot {

struct ModelParams {
  EncoderParams encoder;
  NetParams net;
};

/// Default-config encoder and network seeded from one value.
ModelParams init_model(std::uint64_t seed);

/// Ordered named-tensor bundle; configs travel with the weights. Seeds are
/// not stored and read back as zero.
void save_params(const std::filesystem::path& path, const ModelParams& params);
/// Throws FormatError on missing, extra or misshapen tensors.
ModelParams load_params(const std::filesystem::path& path);

}  // namespace earshot

#endif  // EARSHOT_PARAMS_IO_HPP_
