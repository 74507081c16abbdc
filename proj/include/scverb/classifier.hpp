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

#ifndef SCVERB_CLASSIFIER_HPP_
#define SCVERB_CLASSIFIER_HPP_

#include <algorithm>
#include <map>
#include <string_view>

#include "scverb/backend.hpp"
#include "scverb/verbalizer.hpp"

namespace scverb {

// How the probabilities of a multi-token label word are combined.
enum class Aggregation { kFirst, kMean, kMax };

Aggregation parse_aggregation(std::string_view name);
std::string_view to_string(Aggregation mode);

struct ClassScoreVector {
  std::map<int, double> scores;
  // Lowest class id among those attaining the maximum.
  int argmax = -1;
};

// Class score = mean over the class's label words of the aggregated mask
// probability of the word's tokens. Classes without label words score 0.
// `prob` maps a token id to its probability.
template <typename TokenProb>
ClassScoreVector class_scores_with(const Verbalizer &verbalizer, Aggregation mode,
                                   TokenProb &&prob) {
  ClassScoreVector out;
  double best = 0.0;
  for (const auto &[cls, words] : verbalizer.per_class) {
    double total = 0.0;
    for (const auto &w : words) {
      double v = 0.0;
      switch (mode) {
        case Aggregation::kFirst:
          v = prob(w.token_ids.front());
          break;
        case Aggregation::kMean:
          for (TokenId t : w.token_ids) v += prob(t);
          v /= static_cast<double>(w.token_ids.size());
          break;
        case Aggregation::kMax:
          v = prob(w.token_ids.front());
          for (TokenId t : w.token_ids) v = std::max(v, prob(t));
          break;
      }
      total += v;
    }
    const double score = words.empty() ? 0.0 : total / static_cast<double>(words.size());
    out.scores[cls] = score;
    // per_class iterates in ascending class id, so strict > keeps the lowest.
    if (out.argmax < 0 || score > best) {
      best = score;
      out.argmax = cls;
    }
  }
  return out;
}

// Throws ConfigError when a verbalizer token does not fit `vocab_size`.
void check_vocabulary(const Verbalizer &verbalizer, int vocab_size);

ClassScoreVector class_scores(const Vector &probs, const Verbalizer &verbalizer,
                              Aggregation mode = Aggregation::kMean);

ClassScoreVector class_scores(const MlmBackend &backend, const Verbalizer &verbalizer,
                              std::string_view prompt,
                              Aggregation mode = Aggregation::kMean);

int predict(const MlmBackend &backend, const Verbalizer &verbalizer,
            std::string_view prompt, Aggregation mode = Aggregation::kMean);

}  // namespace scverb

#endif  // SCVERB_CLASSIFIER_HPP_
