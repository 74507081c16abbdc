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

#ifndef SCVERB_MOCK_BACKEND_HPP_
#define SCVERB_MOCK_BACKEND_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "scverb/backend.hpp"
#include "scverb/io.hpp"

namespace scverb {

// When `trigger` appears as a word of a prompt, the logits of every token of
// `words` are raised by `logit`.
struct MockBoost {
  std::string trigger;
  std::vector<std::string> words;
  double logit = 0.0;
};

struct MockConfig {
  std::uint64_t seed = 0;
  int vocab_size = 64;
  std::string mask_token = "[MASK]";
  // Base logits are uniform in [-logit_scale, logit_scale].
  double logit_scale = 1.0;
  std::vector<MockBoost> boosts;
};

MockConfig mock_config_from_json(const Json &doc);

// Deterministic stand-in for a masked language model.
//
// Tokenization lowercases the text, splits on whitespace and hashes each word
// into [0, vocab_size). The mask distribution is the softmax of logits drawn
// from a generator seeded by (seed, prompt digest), plus any boosts whose
// trigger occurs in the prompt. Outputs are bit-exact for a fixed config.
class MockBackend final : public MlmBackend {
 public:
  explicit MockBackend(MockConfig config);
  MockBackend(std::uint64_t seed, int vocab_size);

  BackendMeta meta() const override;
  std::vector<TokenId> tokenize(std::string_view text,
                                bool word_initial = true) const override;
  MaskDistribution mask_distribution(std::string_view prompt) const override;

  // Pre-softmax logits for a prompt; exposed for tests.
  Vector logits(std::string_view prompt) const;

  const MockConfig &config() const { return config_; }

 private:
  MockConfig config_;
  struct CompiledBoost {
    std::string trigger;
    std::vector<TokenId> tokens;
    double logit;
  };
  std::vector<CompiledBoost> boosts_;
};

}  // namespace scverb

#endif  // SCVERB_MOCK_BACKEND_HPP_
