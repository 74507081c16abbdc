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

#ifndef SCVERB_ANNOTATIONS_HPP_
#define SCVERB_ANNOTATIONS_HPP_

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scverb {

// A tagged span produced by an external NER or POS tagger.
struct AnnotatedSpan {
  std::string sample_id;
  std::string surface;
  std::string tag;
};

enum class TaskKind { kTopic, kSentiment };

TaskKind parse_task_kind(std::string_view name);
std::string_view to_string(TaskKind kind);

// Tags whose spans become query keys: named-entity types for topic tasks,
// adjective/adverb POS tags for sentiment tasks.
const std::set<std::string, std::less<>> &allowed_tags(TaskKind kind);

// Normalized query keys and, per key, the samples they came from.
struct QueryKeySet {
  std::set<std::string> keys;
  std::map<std::string, std::set<std::string>> provenance;
};

// One JSON object per line with string fields sample_id, surface and tag.
// Blank lines are skipped.
std::vector<AnnotatedSpan> load_annotations(std::istream &in);
std::vector<AnnotatedSpan> load_annotations(const std::filesystem::path &path);

// Converts `sample_id<TAB>surface<TAB>tag` rows into the JSONL record format.
std::string convert_tagger_dump(std::istream &in);

// Spans with a tag outside allowed_tags(task) are dropped.
QueryKeySet build_key_set(const std::vector<AnnotatedSpan> &spans, TaskKind task);

}  // namespace scverb

#endif  // SCVERB_ANNOTATIONS_HPP_
