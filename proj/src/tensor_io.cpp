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

#include "earshot/tensor_io.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "earshot/errors.hpp"

namespace earshot {

namespace {

constexpr char kTensorMagic[4] = {'B', 'T', 'F', '1'};
constexpr char kBundleMagic[4] = {'B', 'T', 'F', 'N'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  v = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
      (static_cast<std::uint32_t>(bytes[2]) << 16) |
      (static_cast<std::uint32_t>(bytes[3]) << 24);
  return true;
}

void check_magic(std::istream& in, const char (&magic)[4], const char* what) {
  char got[4];
  if (!in.read(got, 4)) throw FormatError(std::string(what) + ": truncated header");
  for (int i = 0; i < 4; ++i) {
    if (got[i] != magic[i]) throw FormatError(std::string(what) + ": bad magic");
  }
}

}  // namespace

std::size_t TensorData::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(std::ostream& out, std::span<const std::uint32_t> dims,
                  std::span<const float> values) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  if (n != values.size()) throw std::invalid_argument("write_tensor: dims do not match payload");
  out.write(kTensorMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) put_u32(out, d);
  for (float v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void write_tensor(const std::filesystem::path& path, std::span<const std::uint32_t> dims,
                  std::span<const float> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_tensor(out, dims, values);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

TensorData read_tensor(std::istream& in) {
  check_magic(in, kTensorMagic, "tensor");
  std::uint32_t ndim = 0;
  if (!get_u32(in, ndim)) throw FormatError("tensor: truncated header");
  TensorData t;
  t.dims.resize(ndim);
  std::size_t n = 1;
  for (auto& d : t.dims) {
    if (!get_u32(in, d)) throw FormatError("tensor: truncated header");
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / 4 / d) {
      throw FormatError("tensor: dimensions overflow");
    }
    n *= d;
  }
  t.values.resize(n);
  for (auto& v : t.values) {
    std::uint32_t bits = 0;
    if (!get_u32(in, bits)) throw FormatError("tensor: truncated payload");
    v = std::bit_cast<float>(bits);
  }
  return t;
}

TensorData read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_tensor(in);
}

void write_bundle(const std::filesystem::path& path, std::span<const NamedTensor> entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kBundleMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    put_u32(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    write_tensor(out, e.tensor.dims, e.tensor.values);
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<NamedTensor> read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  check_magic(in, kBundleMagic, "bundle");
  std::uint32_t count = 0;
  if (!get_u32(in, count)) throw FormatError("bundle: truncated header");
  std::vector<NamedTensor> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t len = 0;
    if (!get_u32(in, len) || len > (1u << 16)) throw FormatError("bundle: bad entry name");
    NamedTensor e;
    e.name.resize(len);
    if (!in.read(e.name.data(), len)) throw FormatError("bundle: truncated entry name");
    e.tensor = read_tensor(in);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace earshot
