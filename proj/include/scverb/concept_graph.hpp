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

#ifndef SCVERB_CONCEPT_GRAPH_HPP_
#define SCVERB_CONCEPT_GRAPH_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scverb {

// One row of the concept knowledge base: `concept_name` is an abstraction of
// `instance`, observed `count` times.
struct ConceptTriple {
  std::string concept_name;
  std::string instance;
  std::uint64_t count = 0;
};

// A concept reached from a query key. correlation is the concept's share of
// all counts recorded for the key, so it lies in (0, 1].
struct ConceptCandidate {
  std::string surface;
  std::string source_key;
  double correlation = 0.0;
  // Every key that produced this surface; filled by dedup_candidates.
  std::vector<std::string> source_keys;

  bool operator==(const ConceptCandidate &) const = default;
};

// Instance -> concepts index. Immutable after construction and safe for
// concurrent readers.
class ConceptGraph {
 public:
  struct Entry {
    std::string concept_name;
    std::uint64_t count;
  };

  ConceptGraph() = default;
  explicit ConceptGraph(const std::vector<ConceptTriple> &triples);

  std::size_t num_instances() const { return index_.size(); }

  // Entries for a normalized instance key, ordered by descending count then
  // ascending concept. Empty for unknown keys.
  const std::vector<Entry> &entries(std::string_view key) const;

  std::uint64_t total(std::string_view key) const;

  const std::map<std::string, std::vector<Entry>, std::less<>> &index() const {
    return index_;
  }

 private:
  std::map<std::string, std::vector<Entry>, std::less<>> index_;
  std::map<std::string, std::uint64_t, std::less<>> totals_;
};

// Parses `concept<TAB>instance<TAB>count` lines. Blank lines are skipped.
// Throws ParseError naming the offending line.
ConceptGraph load_graph(std::istream &in);
ConceptGraph load_graph(const std::filesystem::path &path);

// Up to top_k candidates for `key`, by descending correlation then ascending
// concept. Unknown keys yield an empty list.
std::vector<ConceptCandidate> query_concepts(const ConceptGraph &graph,
                                             std::string_view key,
                                             std::size_t top_k = 50);

}  // namespace scverb

#endif  // SCVERB_CONCEPT_GRAPH_HPP_
