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

#include "scverb/backend.hpp"

#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb {

std::uint64_t prompt_digest(std::string_view prompt) { return fnv1a64(prompt); }

void require_single_mask(std::string_view prompt, std::string_view mask_token) {
  std::size_t count = 0;
  for (std::size_t pos = prompt.find(mask_token); pos != std::string_view::npos;
       pos = prompt.find(mask_token, pos + mask_token.size()))
    ++count;
  if (count != 1)
    throw ArgumentError("prompt must contain exactly one " +
                        std::string(mask_token) + ", found " +
                        std::to_string(count));
}

}  // namespace scverb
