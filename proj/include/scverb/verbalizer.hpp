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

#ifndef SCVERB_VERBALIZER_HPP_
#define SCVERB_VERBALIZER_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scverb/backend.hpp"
#include "scverb/io.hpp"

namespace scverb {

struct LabelWord {
  std::string surface;
  std::vector<TokenId> token_ids;
  double score = 0.0;

  bool operator==(const LabelWord &) const = default;
};

// Settings a verbalizer was built with, stored alongside it.
struct Hyperparameters {
  std::size_t n = 0;
  std::size_t q = 0;
  std::size_t j = 0;
  std::size_t l = 0;
  std::size_t top_k = 0;
  std::uint64_t seed = 0;
  std::string anchor_input = "probabilities";
  std::string concept_reduction = "mean";

  bool operator==(const Hyperparameters &) const = default;
};

// Class id -> label words, best first.
struct Verbalizer {
  std::string template_id;
  Hyperparameters hyperparameters;
  std::map<int, std::vector<LabelWord>> per_class;
  // Not serialized.
  std::vector<std::string> warnings;

  int max_token_id() const;
};

Json to_json(const Verbalizer &v);
Verbalizer verbalizer_from_json(const Json &doc);

// Byte-stable rendering of to_json.
std::string serialize(const Verbalizer &v);

}  // namespace scverb

#endif  // SCVERB_VERBALIZER_HPP_
