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

#include "earshot/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "earshot/errors.hpp"

namespace earshot {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}
void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}
void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

std::vector<Waveform> read_wav_native(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(path.string() + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw FormatError(path.string() + ": malformed fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw FormatError(path.string() + ": malformed extensible fmt chunk");
        format = le16(f + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min(size, bytes.size() - body);
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt) throw FormatError(path.string() + ": missing fmt chunk");
  if (data == nullptr) throw FormatError(path.string() + ": missing data chunk");
  if (channels == 0 || rate == 0) throw FormatError(path.string() + ": invalid channel count or rate");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw FormatError(path.string() + ": unsupported codec (format " + std::to_string(format) +
                      ", " + std::to_string(bits) + " bits); expected PCM16 or float32");
  }

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  std::vector<Waveform> out(channels);
  for (auto& w : out) {
    w.sample_rate = static_cast<int>(rate);
    w.samples.resize(frames);
  }
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (i * channels + c) * width;
      out[c].samples[i] = pcm16 ? static_cast<std::int16_t>(le16(p)) / 32768.0
                                : static_cast<double>(std::bit_cast<float>(le32(p)));
    }
  }
  return out;
}

std::vector<Waveform> read_wav(const std::filesystem::path& path, int target_rate) {
  auto channels = read_wav_native(path);
  for (auto& c : channels) {
    if (c.sample_rate != target_rate) c = resample_linear(c, target_rate);
  }
  return channels;
}

void write_wav(const std::filesystem::path& path, std::span<const Waveform> channels,
               SampleFormat format) {
  if (channels.empty()) throw std::invalid_argument("write_wav: no channels");
  const std::size_t frames = channels.front().size();
  const int rate = channels.front().sample_rate;
  for (const auto& c : channels) {
    if (c.size() != frames || c.sample_rate != rate) {
      throw std::invalid_argument("write_wav: channels differ in length or rate");
    }
  }
  const std::uint16_t count = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : 32;
  const std::uint32_t block = count * bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block);

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  put16(out, count);
  put32(out, static_cast<std::uint32_t>(rate));
  put32(out, static_cast<std::uint32_t>(rate) * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& c : channels) {
      const double v = c.samples[i];
      if (format == SampleFormat::kPcm16) {
        const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
      } else {
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

Waveform resample_linear(const Waveform& wave, int target_rate) {
  if (target_rate <= 0 || wave.sample_rate <= 0) throw std::invalid_argument("resample: bad rate");
  Waveform out;
  out.sample_rate = target_rate;
  if (wave.samples.empty()) return out;
  const double ratio = static_cast<double>(wave.sample_rate) / target_rate;
  const auto length = static_cast<std::size_t>(
      std::llround(static_cast<double>(wave.size()) * target_rate / wave.sample_rate));
  out.samples.resize(length);
  const std::size_t last = wave.size() - 1;
  for (std::size_t i = 0; i < length; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto base = std::min(static_cast<std::size_t>(pos), last);
    const double frac = pos - static_cast<double>(base);
    const double next = wave.samples[std::min(base + 1, last)];
    out.samples[i] = wave.samples[base] + frac * (next - wave.samples[base]);
  }
  return out;
}

}  // namespace earshot
