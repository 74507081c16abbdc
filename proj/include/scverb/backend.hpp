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

#ifndef SCVERB_BACKEND_HPP_
#define SCVERB_BACKEND_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scverb/linalg.hpp"

namespace scverb {

// Index into a backend vocabulary, in [0, vocab_size).
using TokenId = int;

struct BackendMeta {
  int vocab_size = 0;
  std::string mask_token;
  std::string model_id;
  // Id the tokenizer emits for unknown pieces, if it has one. Such ids are
  // excluded from a concept's token list.
  std::optional<TokenId> unk_token_id;
};

// Probability of every vocabulary entry at the mask position of one prompt.
struct MaskDistribution {
  Vector probs;
  std::uint64_t prompt_digest = 0;
};

// A masked language model. Implementations must tolerate concurrent calls.
class MlmBackend {
 public:
  virtual ~MlmBackend() = default;

  virtual BackendMeta meta() const = 0;

  // With word_initial set, the text is tokenized as if it followed a word
  // boundary, selecting word-initial subword variants.
  virtual std::vector<TokenId> tokenize(std::string_view text,
                                        bool word_initial = true) const = 0;

  // Distribution at the first (and only) mask token of `prompt`.
  virtual MaskDistribution mask_distribution(std::string_view prompt) const = 0;
};

std::uint64_t prompt_digest(std::string_view prompt);

// Throws ArgumentError unless `prompt` contains `mask_token` exactly once.
void require_single_mask(std::string_view prompt, std::string_view mask_token);

}  // namespace scverb

#endif  // SCVERB_BACKEND_HPP_
