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

#ifndef SCVERB_TESTS_GOLDENS_HPP_
#define SCVERB_TESTS_GOLDENS_HPP_

// Byte-exact prompts for every built-in frame on fixed inputs.

#include <string>
#include <vector>

#include "scverb/dataset.hpp"

namespace scverb::testing {

struct TemplateGolden {
  std::string template_id;
  Sample sample;
  std::string prompt;
};

inline std::vector<TemplateGolden> template_goldens() {
  const Sample news{"ag", {{"text", "Apple is a giant electronic company."}}, std::nullopt};
  const Sample wiki{"db", {{"title", "BIT."}, {"content", "BIT is a band from Tokyo."}}, std::nullopt};
  const Sample question{"yh", {{"text", "What is the capital of France?"}}, std::nullopt};
  const Sample review{"rv", {{"text", "The plot was thin but the cast was great."}}, std::nullopt};
  const std::string n = news.fields.at("text");
  const std::string w = "BIT. BIT is a band from Tokyo.";
  const std::string q = question.fields.at("text");
  const std::string r = review.fields.at("text");
  return {
      {"agnews-1", news, "A [MASK] news : " + n},
      {"agnews-2", news, n + " This topic is about [MASK]."},
      {"agnews-3", news, "[ Category : [MASK] ] " + n},
      {"agnews-4", news, "[ Topic : [MASK] ] " + n},
      {"dbpedia-1", wiki, w + " BIT is a [MASK] ."},
      {"dbpedia-2", wiki, w + " In this sentence, BIT is a [MASK] ."},
      {"dbpedia-3", wiki, w + " The type of BIT is [MASK] ."},
      {"dbpedia-4", wiki, w + " The category of BIT is [MASK] ."},
      {"yahoo-1", question, "A [MASK] question : " + q},
      {"yahoo-2", question, q + " This topic is about [MASK] ."},
      {"yahoo-3", question, "Category : [MASK] " + q},
      {"yahoo-4", question, "Topic : [MASK] " + q},
      {"amazon-1", review, "It was [MASK] . " + r},
      {"amazon-2", review, "Just [MASK] ! " + r},
      {"amazon-3", review, r + " All in all, it was [MASK] ."},
      {"amazon-4", review, r + " In summary, it was [MASK] ."},
      {"imdb-1", review, "It was [MASK] . " + r},
      {"imdb-2", review, "Just [MASK] ! " + r},
      {"imdb-3", review, r + " All in all, it was [MASK] ."},
      {"imdb-4", review, r + " In summary, the film was [MASK] ."},
  };
}

}  // namespace scverb::testing

#endif  // SCVERB_TESTS_GOLDENS_HPP_
