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

#include "scverb/verbalizer.hpp"

#include <algorithm>

#include "scverb/error.hpp"

namespace scverb {

int Verbalizer::max_token_id() const {
  int best = -1;
  for (const auto &[cls, words] : per_class)
    for (const auto &w : words)
      for (TokenId t : w.token_ids) best = std::max(best, t);
  return best;
}

Json to_json(const Verbalizer &v) {
  const Hyperparameters &h = v.hyperparameters;
  Json classes = Json::object();
  for (const auto &[cls, words] : v.per_class) {
    Json list = Json::array();
    for (const auto &w : words)
      list.push_back({{"surface", w.surface}, {"token_ids", w.token_ids}, {"score", w.score}});
    classes[std::to_string(cls)] = std::move(list);
  }
  return {{"template_id", v.template_id},
          {"hyperparameters",
           {{"n", h.n}, {"q", h.q}, {"j", h.j}, {"l", h.l}, {"top_k", h.top_k},
            {"seed", h.seed}, {"anchor_input", h.anchor_input},
            {"concept_reduction", h.concept_reduction}}},
          {"classes", std::move(classes)}};
}

Verbalizer verbalizer_from_json(const Json &doc) {
  try {
    Verbalizer v;
    v.template_id = doc.at("template_id").get<std::string>();
    const Json &h = doc.at("hyperparameters");
    v.hyperparameters.n = h.value("n", std::size_t{0});
    v.hyperparameters.q = h.value("q", std::size_t{0});
    v.hyperparameters.j = h.value("j", std::size_t{0});
    v.hyperparameters.l = h.value("l", std::size_t{0});
    v.hyperparameters.top_k = h.value("top_k", std::size_t{0});
    v.hyperparameters.seed = h.value("seed", std::uint64_t{0});
    v.hyperparameters.anchor_input = h.value("anchor_input", std::string("probabilities"));
    v.hyperparameters.concept_reduction = h.value("concept_reduction", std::string("mean"));
    for (const auto &[key, list] : doc.at("classes").items()) {
      auto &words = v.per_class[std::stoi(key)];
      for (const auto &w : list)
        words.push_back({w.at("surface").get<std::string>(),
                         w.at("token_ids").get<std::vector<TokenId>>(),
                         w.at("score").get<double>()});
    }
    return v;
  } catch (const Json::exception &e) {
    throw ParseError(0, std::string("invalid verbalizer document: ") + e.what());
  } catch (const std::invalid_argument &) {
    throw ParseError(0, "invalid verbalizer document: class keys must be integers");
  }
}

std::string serialize(const Verbalizer &v) { return dump_canonical(to_json(v)); }

}  // namespace scverb
