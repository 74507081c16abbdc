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

#include "scverb/prompt_template.hpp"

#include <cctype>
#include <set>

#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

const std::set<std::string, std::less<>> kPlaceholders = {"mask", "text", "title", "content",
                                                          "title_nopunct"};

// Splits a pattern into literal text and placeholder names, alternating.
struct Piece {
  bool placeholder;
  std::string value;
};

std::vector<Piece> parse_pattern(std::string_view pattern) {
  std::vector<Piece> pieces;
  std::size_t i = 0;
  while (i < pattern.size()) {
    std::size_t open = pattern.find('{', i);
    if (open == std::string_view::npos) {
      pieces.push_back({false, std::string(pattern.substr(i))});
      break;
    }
    if (open > i) pieces.push_back({false, std::string(pattern.substr(i, open - i))});
    std::size_t close = pattern.find('}', open);
    if (close == std::string_view::npos)
      throw ArgumentError("unterminated placeholder in template '" + std::string(pattern) + "'");
    std::string name(pattern.substr(open + 1, close - open - 1));
    if (!kPlaceholders.contains(name))
      throw ArgumentError("unknown placeholder {" + name + "}");
    pieces.push_back({true, name});
    i = close + 1;
  }
  return pieces;
}

const std::string &field(const Sample &sample, const std::string &name) {
  auto it = sample.fields.find(name);
  if (it == sample.fields.end())
    throw ArgumentError("sample " + sample.id + " lacks field \"" + name + "\"");
  return it->second;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string id, std::string pattern,
                               std::size_t truncation_limit, TaskKind task)
    : id_(std::move(id)),
      pattern_(std::move(pattern)),
      truncation_limit_(truncation_limit),
      task_(task) {
  int masks = 0;
  for (const auto &p : parse_pattern(pattern_)) masks += p.placeholder && p.value == "mask";
  if (masks != 1)
    throw ArgumentError("template '" + id_ + "' must contain exactly one {mask}, found " +
                        std::to_string(masks));
  if (truncation_limit_ < 1) throw ArgumentError("truncation limit must be >= 1");
}

std::vector<std::string> PromptTemplate::required_fields() const {
  std::set<std::string> names;
  for (const auto &p : parse_pattern(pattern_)) {
    if (!p.placeholder || p.value == "mask") continue;
    names.insert(p.value == "title_nopunct" ? "title" : p.value);
  }
  return {names.begin(), names.end()};
}

const std::vector<PromptTemplate> &builtin_templates() {
  static const std::vector<PromptTemplate> kTemplates = [] {
    const auto topic = TaskKind::kTopic;
    const auto sentiment = TaskKind::kSentiment;
    return std::vector<PromptTemplate>{
        {"agnews-1", "A {mask} news : {text}", 128, topic},
        {"agnews-2", "{text} This topic is about {mask}.", 128, topic},
        {"agnews-3", "[ Category : {mask} ] {text}", 128, topic},
        {"agnews-4", "[ Topic : {mask} ] {text}", 128, topic},
        {"dbpedia-1", "{title} {content} {title_nopunct} is a {mask} .", 128, topic},
        {"dbpedia-2", "{title} {content} In this sentence, {title_nopunct} is a {mask} .", 128, topic},
        {"dbpedia-3", "{title} {content} The type of {title_nopunct} is {mask} .", 128, topic},
        {"dbpedia-4", "{title} {content} The category of {title_nopunct} is {mask} .", 128, topic},
        {"yahoo-1", "A {mask} question : {text}", 128, topic},
        {"yahoo-2", "{text} This topic is about {mask} .", 128, topic},
        {"yahoo-3", "Category : {mask} {text}", 128, topic},
        {"yahoo-4", "Topic : {mask} {text}", 128, topic},
        {"amazon-1", "It was {mask} . {text}", 512, sentiment},
        {"amazon-2", "Just {mask} ! {text}", 512, sentiment},
        {"amazon-3", "{text} All in all, it was {mask} .", 512, sentiment},
        {"amazon-4", "{text} In summary, it was {mask} .", 512, sentiment},
        {"imdb-1", "It was {mask} . {text}", 512, sentiment},
        {"imdb-2", "Just {mask} ! {text}", 512, sentiment},
        {"imdb-3", "{text} All in all, it was {mask} .", 512, sentiment},
        {"imdb-4", "{text} In summary, the film was {mask} .", 512, sentiment},
    };
  }();
  return kTemplates;
}

const PromptTemplate &find_template(std::string_view id) {
  for (const auto &t : builtin_templates())
    if (t.id() == id) return t;
  throw ArgumentError("unknown template '" + std::string(id) + "'");
}

std::string strip_final_punctuation(std::string_view title) {
  std::string out = trim(title);
  if (!out.empty() && std::ispunct(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

std::string fill_template(const PromptTemplate &tmpl, const Sample &sample,
                          std::string_view mask_token) {
  std::string out;
  for (const auto &p : parse_pattern(tmpl.pattern())) {
    if (!p.placeholder) {
      out += p.value;
    } else if (p.value == "mask") {
      out += mask_token;
    } else if (p.value == "title_nopunct") {
      out += strip_final_punctuation(field(sample, "title"));
    } else {
      out += field(sample, p.value);
    }
  }
  return out;
}

std::string truncate_to_tokens(std::string_view text, std::size_t limit,
                               const MlmBackend &backend) {
  if (trim(text).empty()) return std::string(text);
  if (backend.tokenize(text, false).size() <= limit) return std::string(text);
  // Token count grows with the word prefix; binary search the longest fit.
  const std::vector<std::string> words = split_whitespace(text);
  auto prefix = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s.push_back(' ');
      s += words[i];
    }
    return s;
  };
  std::size_t lo = 0, hi = words.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (backend.tokenize(prefix(mid), false).size() <= limit)
      lo = mid;
    else
      hi = mid - 1;
  }
  return prefix(lo);
}

std::string wrap_template(const Sample &sample, const PromptTemplate &tmpl,
                          const MlmBackend &backend) {
  Sample truncated = sample;
  for (const char *name : {"text", "title", "content"}) {
    auto it = truncated.fields.find(name);
    if (it != truncated.fields.end())
      it->second = truncate_to_tokens(it->second, tmpl.truncation_limit(), backend);
  }
  return fill_template(tmpl, truncated, backend.meta().mask_token);
}

}  // namespace scverb
