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

#include "scverb/concept_graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "scverb/error.hpp"
#include "scverb/io.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

ConceptTriple parse_record(const std::string &line, std::size_t lineno) {
  std::vector<std::string> fields = split(line, '\t');
  if (fields.size() != 3)
    throw ParseError(lineno, "expected 3 tab-separated fields, got " +
                                 std::to_string(fields.size()));
  ConceptTriple t{trim(fields[0]), normalize_key(fields[1]), 0};
  if (t.concept_name.empty() || t.instance.empty())
    throw ParseError(lineno, "empty concept or instance");
  std::string count = trim(fields[2]);
  long long value = 0;
  auto [end, ec] = std::from_chars(count.data(), count.data() + count.size(), value);
  if (ec != std::errc() || end != count.data() + count.size())
    throw ParseError(lineno, "count is not an integer: '" + count + "'");
  if (value < 1) throw ParseError(lineno, "count must be >= 1");
  t.count = static_cast<std::uint64_t>(value);
  return t;
}

ConceptGraph parse_lines(const std::vector<std::string> &lines) {
  std::vector<ConceptTriple> triples;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    triples.push_back(parse_record(lines[i], i + 1));
  }
  return ConceptGraph(triples);
}

}  // namespace

ConceptGraph::ConceptGraph(const std::vector<ConceptTriple> &triples) {
  // Repeated (concept, instance) rows accumulate.
  std::map<std::string, std::map<std::string, std::uint64_t>, std::less<>> acc;
  for (const auto &t : triples) acc[t.instance][t.concept_name] += t.count;
  for (auto &[instance, concepts] : acc) {
    std::vector<Entry> &list = index_[instance];
    std::uint64_t total = 0;
    for (auto &[name, count] : concepts) {
      list.push_back({name, count});
      total += count;
    }
    std::stable_sort(list.begin(), list.end(), [](const Entry &a, const Entry &b) {
      return a.count > b.count;
    });
    totals_[instance] = total;
  }
}

const std::vector<ConceptGraph::Entry> &ConceptGraph::entries(
    std::string_view key) const {
  static const std::vector<Entry> kEmpty;
  auto it = index_.find(key);
  return it == index_.end() ? kEmpty : it->second;
}

std::uint64_t ConceptGraph::total(std::string_view key) const {
  auto it = totals_.find(key);
  return it == totals_.end() ? 0 : it->second;
}

ConceptGraph load_graph(std::istream &in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return parse_lines(lines);
}

ConceptGraph load_graph(const std::filesystem::path &path) {
  return parse_lines(read_lines(path));
}

std::vector<ConceptCandidate> query_concepts(const ConceptGraph &graph,
                                             std::string_view key,
                                             std::size_t top_k) {
  if (top_k < 1) throw ArgumentError("top_k must be >= 1");
  std::string norm = normalize_key(key);
  const auto &list = graph.entries(norm);
  const double total = static_cast<double>(graph.total(norm));
  std::vector<ConceptCandidate> out;
  for (std::size_t i = 0; i < list.size() && i < top_k; ++i) {
    out.push_back({list[i].concept_name, norm,
                   static_cast<double>(list[i].count) / total,
                   {norm}});
  }
  return out;
}

}  // namespace scverb
