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

#include "earshot/params_io.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

#include "earshot/errors.hpp"
#include "earshot/tensor_io.hpp"

namespace earshot {

namespace {

struct Slot {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::span<double> values;
};

using Slots = std::vector<Slot>;

std::uint32_t u32(int v) { return static_cast<std::uint32_t>(v); }

void add_dense(Slots& s, const std::string& name, Dense& d) {
  s.push_back({name + ".weights", {u32(d.out), u32(d.in)}, d.weights});
  s.push_back({name + ".bias", {u32(d.out)}, d.bias});
}

void add_conv(Slots& s, const std::string& name, Conv2d& c) {
  const auto k = u32(c.shape.kernel);
  s.push_back({name + ".weights", {u32(c.out), u32(c.in), k, k}, c.weights});
  s.push_back({name + ".bias", {u32(c.out)}, c.bias});
}

Slots encoder_slots(EncoderParams& p) {
  Slots s;
  add_dense(s, "encoder.patch_embed", p.patch_embed);
  add_dense(s, "encoder.query", p.query);
  add_dense(s, "encoder.key", p.key);
  add_dense(s, "encoder.value", p.value);
  add_dense(s, "encoder.project", p.project);
  for (auto [name, head] : {std::pair{"encoder.left_head", &p.left_head},
                            std::pair{"encoder.right_head", &p.right_head}}) {
    s.push_back({std::string(name) + ".weights", {u32(static_cast<int>(head->weights.size()))},
                 head->weights});
    s.push_back({std::string(name) + ".bias", {u32(head->bias.height()), u32(head->bias.width())},
                 head->bias.values()});
  }
  add_dense(s, "encoder.descriptor_hidden", p.descriptor_hidden);
  add_dense(s, "encoder.descriptor_out", p.descriptor_out);
  return s;
}

Slots net_slots(NetParams& p) {
  Slots s;
  for (int i = 0; i < 3; ++i) add_conv(s, "net.down" + std::to_string(i), p.down[i]);
  for (int i = 0; i < 3; ++i) add_conv(s, "net.up" + std::to_string(i), p.up[i]);
  for (std::size_t i = 0; i < p.film.stages.size(); ++i) {
    add_dense(s, "net.film" + std::to_string(i) + ".gamma", p.film.stages[i].gamma);
    add_dense(s, "net.film" + std::to_string(i) + ".beta", p.film.stages[i].beta);
  }
  add_conv(s, "net.output", p.output);
  for (auto [name, head] : {std::pair{"net.left_head", &p.left_head},
                            std::pair{"net.right_head", &p.right_head}}) {
    add_dense(s, std::string(name) + ".side", head->side);
    add_conv(s, std::string(name) + ".mix", head->mix);
    add_conv(s, std::string(name) + ".out", head->out);
  }
  return s;
}

std::vector<float> encoder_config_values(const EncoderConfig& c) {
  return {static_cast<float>(c.image_channels), static_cast<float>(c.patch_size),
          static_cast<float>(c.embed_dim),      static_cast<float>(c.grid_height),
          static_cast<float>(c.grid_width),     static_cast<float>(c.descriptor_hidden),
          static_cast<float>(c.descriptor_dim), static_cast<float>(c.init_limit)};
}

std::vector<float> net_config_values(const NetConfig& c) {
  return {static_cast<float>(c.widths[0]),      static_cast<float>(c.widths[1]),
          static_cast<float>(c.widths[2]),      static_cast<float>(c.descriptor_dim),
          static_cast<float>(c.feature_channels), static_cast<float>(c.side_dim),
          static_cast<float>(c.head_hidden)};
}

NamedTensor to_named(const std::string& name, std::vector<std::uint32_t> dims,
                     std::span<const double> values) {
  NamedTensor t{name, {std::move(dims), {}}};
  t.tensor.values.reserve(values.size());
  for (double v : values) t.tensor.values.push_back(static_cast<float>(v));
  return t;
}

const TensorData& require(const std::map<std::string, TensorData>& entries,
                          const std::string& name, std::size_t count) {
  const auto it = entries.find(name);
  if (it == entries.end()) throw FormatError("params: missing tensor " + name);
  if (it->second.values.size() != count) throw FormatError("params: bad size for " + name);
  return it->second;
}

int as_int(float v) { return static_cast<int>(v); }

}  // namespace

ModelParams init_model(std::uint64_t seed) {
  return {EncoderParams::init(EncoderConfig{}, seed),
          NetParams::init(NetConfig{}, seed ^ 0x9e3779b97f4a7c15ULL)};
}

void save_params(const std::filesystem::path& path, const ModelParams& params) {
  params.encoder.validate();
  params.net.validate();
  ModelParams copy = params;
  std::vector<NamedTensor> entries;
  auto ec = encoder_config_values(copy.encoder.config);
  entries.push_back({"encoder.config", {{u32(static_cast<int>(ec.size()))}, ec}});
  auto nc = net_config_values(copy.net.config);
  entries.push_back({"net.config", {{u32(static_cast<int>(nc.size()))}, nc}});
  for (const auto& s : encoder_slots(copy.encoder)) entries.push_back(to_named(s.name, s.dims, s.values));
  for (const auto& s : net_slots(copy.net)) entries.push_back(to_named(s.name, s.dims, s.values));
  write_bundle(path, entries);
}

ModelParams load_params(const std::filesystem::path& path) {
  std::map<std::string, TensorData> entries;
  for (auto& e : read_bundle(path)) {
    if (!entries.emplace(e.name, std::move(e.tensor)).second) {
      throw FormatError("params: duplicate tensor " + e.name);
    }
  }

  const auto& ev = require(entries, "encoder.config", 8).values;
  EncoderConfig ec;
  ec.image_channels = as_int(ev[0]);
  ec.patch_size = as_int(ev[1]);
  ec.embed_dim = as_int(ev[2]);
  ec.grid_height = as_int(ev[3]);
  ec.grid_width = as_int(ev[4]);
  ec.descriptor_hidden = as_int(ev[5]);
  ec.descriptor_dim = as_int(ev[6]);
  ec.init_limit = ev[7];
  const auto& nv = require(entries, "net.config", 7).values;
  NetConfig nc;
  nc.widths = {as_int(nv[0]), as_int(nv[1]), as_int(nv[2])};
  nc.descriptor_dim = as_int(nv[3]);
  nc.feature_channels = as_int(nv[4]);
  nc.side_dim = as_int(nv[5]);
  nc.head_hidden = as_int(nv[6]);

  ModelParams p;
  try {
    p = {EncoderParams::init(ec, 0), NetParams::init(nc, 0)};
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("params: invalid stored config: ") + e.what());
  }
  std::size_t used = 2;
  auto fill = [&](const Slots& slots) {
    for (const auto& s : slots) {
      const auto& t = require(entries, s.name, s.values.size());
      if (t.dims != s.dims) throw FormatError("params: bad shape for " + s.name);
      for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = t.values[i];
      ++used;
    }
  };
  fill(encoder_slots(p.encoder));
  fill(net_slots(p.net));
  if (used != entries.size()) throw FormatError("params: unexpected extra tensors");
  return p;
}

}  // namespace earshot
