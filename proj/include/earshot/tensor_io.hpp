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

#ifndef EARSHOT_TENSOR_IO_HPP_
#define EARSHOT_TENSOR_IO_HPP_

// BTF1 container: "BTF1", uint32 ndim, ndim x uint32 dims, then the
// row-major float32 payload; all little-endian.
//
// Named bundles ("BTFN", uint32 count, then per entry uint32 name length,
// name bytes and an embedded BTF1 record) hold ordered parameter sets.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace earshot {

struct TensorData {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const;
  friend bool operator==(const TensorData&, const TensorData&) = default;
};

void write_tensor(std::ostream& out, std::span<const std::uint32_t> dims,
                  std::span<const float> values);
void write_tensor(const std::filesystem::path& path,
                  std::span<const std::uint32_t> dims,
                  std::span<const float> values);
/// Throws FormatError on bad magic or a truncated header/payload.
TensorData read_tensor(std::istream& in);
TensorData read_tensor(const std::filesystem::path& path);

struct NamedTensor {
  std::string name;
  TensorData tensor;
  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

void write_bundle(const std::filesystem::path& path, std::span<const NamedTensor> entries);
std::vector<NamedTensor> read_bundle(const std::filesystem::path& path);

}  // namespace earshot

#endif  // EARSHOT_TENSOR_IO_HPP_
