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

#ifndef EARSHOT_ERRORS_HPP_
#define EARSHOT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace earshot {

// Shape mismatches and invalid configurations surface as
// std::invalid_argument. The two classes below separate failures the CLI
// reports with distinct exit codes.

/// Malformed or unsupported file content (bad magic, truncated payload,
/// unsupported WAV codec).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite or undefined value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace earshot

#endif  // EARSHOT_ERRORS_HPP_
