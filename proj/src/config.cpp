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

#include "earshot/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace earshot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("config: bad value for " + key + ": '" + text + "'");
  }
  return value;
}

}  // namespace

void RunConfig::validate() const {
  if (sample_rate <= 0) throw std::invalid_argument("config: sample_rate must be positive");
  stft.validate();
  if (seg_len == 0 || infer_hop == 0) throw std::invalid_argument("config: seg_len and infer_hop must be positive");
  if (infer_hop > seg_len) throw std::invalid_argument("config: infer_hop exceeds seg_len");
  if (k_crops <= 0) throw std::invalid_argument("config: k_crops must be positive");
  if (!(lambda_rl >= 0.0) || !(lambda0 >= 0.0)) throw std::invalid_argument("config: loss weights must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("config: eps must be positive");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "sample_rate") sample_rate = parse_number<int>(key, value);
  else if (key == "window") stft.window_len = parse_number<int>(key, value);
  else if (key == "hop") stft.hop_len = parse_number<int>(key, value);
  else if (key == "fft") stft.fft_len = parse_number<int>(key, value);
  else if (key == "seg_len") seg_len = parse_number<std::size_t>(key, value);
  else if (key == "infer_hop") infer_hop = parse_number<std::size_t>(key, value);
  else if (key == "k_crops") k_crops = parse_number<int>(key, value);
  else if (key == "lambda_rl") lambda_rl = parse_number<double>(key, value);
  else if (key == "lambda0") lambda0 = parse_number<double>(key, value);
  else if (key == "eps") eps = parse_number<double>(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  return parse_config(in, base);
}

}  // namespace earshot
