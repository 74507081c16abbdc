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

#ifndef SCVERB_PROMPT_TEMPLATE_HPP_
#define SCVERB_PROMPT_TEMPLATE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "scverb/annotations.hpp"
#include "scverb/backend.hpp"
#include "scverb/dataset.hpp"

namespace scverb {

// A cloze frame such as "A {mask} news : {text}". Recognized placeholders:
// {mask}, {text}, {title}, {content} and {title_nopunct} (the title with one
// trailing punctuation mark removed). Exactly one {mask} is required.
class PromptTemplate {
 public:
  PromptTemplate(std::string id, std::string pattern, std::size_t truncation_limit,
                 TaskKind task = TaskKind::kTopic);

  const std::string &id() const { return id_; }
  const std::string &pattern() const { return pattern_; }
  std::size_t truncation_limit() const { return truncation_limit_; }
  TaskKind task() const { return task_; }

  // Sample fields the pattern reads ({title_nopunct} reads "title").
  std::vector<std::string> required_fields() const;

 private:
  std::string id_;
  std::string pattern_;
  std::size_t truncation_limit_;
  TaskKind task_;
};

// Frames for AG's News, DBPedia and Yahoo (topic, 128 tokens) and Amazon and
// IMDB (sentiment, 512 tokens). Ids look like "agnews-1" .. "imdb-4".
const std::vector<PromptTemplate> &builtin_templates();
const PromptTemplate &find_template(std::string_view id);

std::string strip_final_punctuation(std::string_view title);

// Substitutes fields into the frame without truncation.
std::string fill_template(const PromptTemplate &tmpl, const Sample &sample,
                          std::string_view mask_token);

// Longest whitespace-word prefix of `text` that tokenizes to at most `limit`
// tokens.
std::string truncate_to_tokens(std::string_view text, std::size_t limit,
                               const MlmBackend &backend);

// Truncates the free-text fields ({text}, {content}) to the template's limit in
// backend tokens, then fills the frame. The frame itself is never truncated.
std::string wrap_template(const Sample &sample, const PromptTemplate &tmpl,
                          const MlmBackend &backend);

}  // namespace scverb

#endif  // SCVERB_PROMPT_TEMPLATE_HPP_
