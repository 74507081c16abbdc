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

#include "scverb/mock_backend.hpp"

#include <algorithm>
#include <random>

#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb {

MockConfig mock_config_from_json(const Json &doc) {
  MockConfig c;
  c.seed = doc.value("seed", std::uint64_t{0});
  c.vocab_size = doc.value("vocab_size", 64);
  c.mask_token = doc.value("mask_token", std::string("[MASK]"));
  c.logit_scale = doc.value("logit_scale", 1.0);
  if (auto it = doc.find("boosts"); it != doc.end()) {
    for (const auto &b : *it) {
      c.boosts.push_back({b.at("trigger").get<std::string>(),
                          b.at("words").get<std::vector<std::string>>(),
                          b.at("logit").get<double>()});
    }
  }
  return c;
}

MockBackend::MockBackend(std::uint64_t seed, int vocab_size)
    : MockBackend(MockConfig{seed, vocab_size, "[MASK]", 1.0, {}}) {}

MockBackend::MockBackend(MockConfig config) : config_(std::move(config)) {
  if (config_.vocab_size < 2) throw ArgumentError("vocab_size must be >= 2");
  if (config_.mask_token.empty()) throw ArgumentError("empty mask token");
  for (const auto &b : config_.boosts) {
    CompiledBoost cb{normalize_key(b.trigger), {}, b.logit};
    for (const auto &w : b.words) {
      auto ids = tokenize(w);
      cb.tokens.insert(cb.tokens.end(), ids.begin(), ids.end());
    }
    std::sort(cb.tokens.begin(), cb.tokens.end());
    cb.tokens.erase(std::unique(cb.tokens.begin(), cb.tokens.end()), cb.tokens.end());
    boosts_.push_back(std::move(cb));
  }
}

BackendMeta MockBackend::meta() const {
  return {config_.vocab_size, config_.mask_token,
          "mock-" + std::to_string(config_.seed), std::nullopt};
}

std::vector<TokenId> MockBackend::tokenize(std::string_view text, bool) const {
  std::vector<std::string> words = split_whitespace(normalize_key(text));
  if (words.empty()) throw ArgumentError("cannot tokenize empty text");
  std::vector<TokenId> ids;
  ids.reserve(words.size());
  for (const auto &w : words)
    ids.push_back(static_cast<TokenId>(fnv1a64(w) %
                                       static_cast<std::uint64_t>(config_.vocab_size)));
  return ids;
}

Vector MockBackend::logits(std::string_view prompt) const {
  require_single_mask(prompt, config_.mask_token);
  // mt19937_64 output is fixed by the standard, unlike the std distributions,
  // so uniforms are derived from the raw bits.
  std::mt19937_64 gen(config_.seed * 0x9E3779B97F4A7C15ull ^ prompt_digest(prompt));
  Vector z(config_.vocab_size);
  for (Eigen::Index t = 0; t < z.size(); ++t) {
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    z(t) = config_.logit_scale * (2.0 * u - 1.0);
  }
  if (!boosts_.empty()) {
    std::vector<std::string> words = split_whitespace(normalize_key(prompt));
    for (const auto &b : boosts_) {
      if (std::find(words.begin(), words.end(), b.trigger) == words.end()) continue;
      for (TokenId t : b.tokens) z(t) += b.logit;
    }
  }
  return z;
}

MaskDistribution MockBackend::mask_distribution(std::string_view prompt) const {
  return {softmax(logits(prompt)), prompt_digest(prompt)};
}

}  // namespace scverb
