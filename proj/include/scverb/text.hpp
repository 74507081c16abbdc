// Copyright 2026 The scverb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCVERB_TEXT_HPP_
#define SCVERB_TEXT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scverb {

// Lowercases ASCII letters, trims, and collapses internal whitespace runs to
// a single space. Shared by KB instances, annotation keys and concepts.
std::string normalize_key(std::string_view text);

std::string trim(std::string_view text);

std::vector<std::string> split_whitespace(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

// 64-bit FNV-1a. Stable across platforms; used for prompt digests and the
// mock tokenizer.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 14695981039346656037ull);

// Lowercase hex rendering of a digest.
std::string hex_digest(std::uint64_t digest);

}  // namespace scverb

#endif  // SCVERB_TEXT_HPP_
