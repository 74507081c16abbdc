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

#include "scverb/classifier.hpp"

#include "scverb/error.hpp"

namespace scverb {

Aggregation parse_aggregation(std::string_view name) {
  if (name == "first") return Aggregation::kFirst;
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  throw ArgumentError("aggregation must be first, mean or max, got '" +
                      std::string(name) + "'");
}

std::string_view to_string(Aggregation mode) {
  switch (mode) {
    case Aggregation::kFirst: return "first";
    case Aggregation::kMax: return "max";
    default: return "mean";
  }
}

void check_vocabulary(const Verbalizer &verbalizer, int vocab_size) {
  for (const auto &[cls, words] : verbalizer.per_class)
    for (const auto &w : words) {
      if (w.token_ids.empty())
        throw ConfigError("label word '" + w.surface + "' has no tokens");
      for (TokenId t : w.token_ids)
        if (t < 0 || t >= vocab_size)
          throw ConfigError("label word '" + w.surface + "' uses token " +
                            std::to_string(t) + ", backend vocabulary has " +
                            std::to_string(vocab_size) + " entries");
    }
}

ClassScoreVector class_scores(const Vector &probs, const Verbalizer &verbalizer,
                              Aggregation mode) {
  check_vocabulary(verbalizer, static_cast<int>(probs.size()));
  return class_scores_with(verbalizer, mode, [&](TokenId t) { return probs(t); });
}

ClassScoreVector class_scores(const MlmBackend &backend, const Verbalizer &verbalizer,
                              std::string_view prompt, Aggregation mode) {
  check_vocabulary(verbalizer, backend.meta().vocab_size);
  const MaskDistribution dist = backend.mask_distribution(prompt);
  return class_scores_with(verbalizer, mode, [&](TokenId t) { return dist.probs(t); });
}

int predict(const MlmBackend &backend, const Verbalizer &verbalizer,
            std::string_view prompt, Aggregation mode) {
  return class_scores(backend, verbalizer, prompt, mode).argmax;
}

}  // namespace scverb
