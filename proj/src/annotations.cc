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

#include "scverb/annotations.hpp"

#include <sstream>

#include "scverb/error.hpp"
#include "scverb/io.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

std::string required_string(const Json &rec, const char *field,
                            std::size_t lineno) {
  auto it = rec.find(field);
  if (it == rec.end())
    throw ParseError(lineno, std::string("missing field \"") + field + "\"");
  if (!it->is_string())
    throw ParseError(lineno, std::string("field \"") + field + "\" must be a string");
  return it->get<std::string>();
}

std::vector<AnnotatedSpan> parse_lines(const std::vector<std::string> &lines) {
  std::vector<AnnotatedSpan> spans;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    Json rec = Json::parse(lines[i], nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      throw ParseError(i + 1, "not a JSON object");
    AnnotatedSpan span{required_string(rec, "sample_id", i + 1),
                       required_string(rec, "surface", i + 1),
                       required_string(rec, "tag", i + 1)};
    if (trim(span.surface).empty()) throw ParseError(i + 1, "empty surface");
    spans.push_back(std::move(span));
  }
  return spans;
}

}  // namespace

TaskKind parse_task_kind(std::string_view name) {
  if (name == "topic") return TaskKind::kTopic;
  if (name == "sentiment") return TaskKind::kSentiment;
  throw ArgumentError("unknown task kind '" + std::string(name) +
                      "' (expected topic or sentiment)");
}

std::string_view to_string(TaskKind kind) {
  return kind == TaskKind::kTopic ? "topic" : "sentiment";
}

const std::set<std::string, std::less<>> &allowed_tags(TaskKind kind) {
  static const std::set<std::string, std::less<>> kTopic = {
      "PERSON",      "LOCATION", "ORGANIZATION",    "MISC",
      "CITY",        "COUNTRY",  "NATIONALITY",     "RELIGION",
      "TITLE",       "CRIMINAL_CHARGE", "STATE_OR_PROVINCE", "CAUSE_OF_DEATH"};
  static const std::set<std::string, std::less<>> kSentiment = {"ADV", "ADJ"};
  return kind == TaskKind::kTopic ? kTopic : kSentiment;
}

std::vector<AnnotatedSpan> load_annotations(std::istream &in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_lines(lines);
}

std::vector<AnnotatedSpan> load_annotations(const std::filesystem::path &path) {
  return parse_lines(read_lines(path));
}

std::string convert_tagger_dump(std::istream &in) {
  std::string out, line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      throw ParseError(lineno, "expected sample_id<TAB>surface<TAB>tag");
    Json rec = {{"sample_id", fields[0]}, {"surface", fields[1]}, {"tag", fields[2]}};
    out += dump_canonical_line(rec);
    out.push_back('\n');
  }
  return out;
}

QueryKeySet build_key_set(const std::vector<AnnotatedSpan> &spans, TaskKind task) {
  const auto &allowed = allowed_tags(task);
  QueryKeySet out;
  for (const auto &span : spans) {
    if (!allowed.contains(span.tag)) continue;
    std::string key = normalize_key(span.surface);
    if (key.empty()) continue;
    out.keys.insert(key);
    out.provenance[key].insert(span.sample_id);
  }
  return out;
}

}  // namespace scverb
