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

#ifndef SCVERB_CALIBRATION_HPP_
#define SCVERB_CALIBRATION_HPP_

// Cascade calibration of mined concepts into a verbalizer:
//
//   1. anchors: Q(.|x) = softmax(P(mask = . | x)) for every support prompt x;
//   2. language-model calibration: S_t(c) = sum_x mean_{t in c} Q(t|x),
//      keep the j best concepts, ignoring labels;
//   3. category calibration: per class y, every token gets the one-vs-rest
//      log-odds score S(t, y) = sum_{x in T_y} logit Q(t|x)
//                             - sum_{x not in T_y} logit Q(t|x),
//      a concept scores the mean of its tokens, and the l best per class
//      become that class's label words.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scverb/backend.hpp"
#include "scverb/concept_graph.hpp"
#include "scverb/linalg.hpp"
#include "scverb/verbalizer.hpp"

namespace scverb {

// What the anchor softmax is applied to. kLogits recovers logits as log P,
// which makes the anchor equal to P itself.
enum class AnchorInput { kProbabilities, kLogits };
// How per-token category scores combine into a concept score.
enum class ConceptReduction { kMean, kSum };

AnchorInput parse_anchor_input(std::string_view name);
ConceptReduction parse_concept_reduction(std::string_view name);
std::string_view to_string(AnchorInput mode);
std::string_view to_string(ConceptReduction mode);

struct CalibrationOptions {
  AnchorInput anchor_input = AnchorInput::kProbabilities;
  ConceptReduction concept_reduction = ConceptReduction::kMean;
};

struct AnchorDistribution {
  Vector q;
  std::uint64_t source_prompt_digest = 0;
};

// Anchor of an already fetched mask distribution.
AnchorDistribution make_anchor(const MaskDistribution &dist,
                               AnchorInput mode = AnchorInput::kProbabilities);

// Anchors keyed by (prompt digest, mode). Insertions are idempotent and
// concurrent lookups are safe.
class AnchorCache {
 public:
  std::shared_ptr<const AnchorDistribution> find(std::uint64_t digest,
                                                 AnchorInput mode) const;
  std::shared_ptr<const AnchorDistribution> insert(std::uint64_t digest,
                                                   AnchorInput mode,
                                                   AnchorDistribution anchor);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::uint64_t, int>, std::shared_ptr<const AnchorDistribution>> map_;
};

AnchorDistribution compute_anchor(const MlmBackend &backend, std::string_view prompt,
                                  AnchorInput mode = AnchorInput::kProbabilities,
                                  AnchorCache *cache = nullptr);

// Per-prompt vocabulary vectors restricted to the tokens a computation needs:
// row r holds token tokens()[r], column s holds prompt s.
class TokenTable {
 public:
  TokenTable() = default;
  TokenTable(std::vector<TokenId> tokens, Eigen::Index columns);

  Eigen::Index row(TokenId token) const;
  bool contains(TokenId token) const { return rows_.contains(token); }
  const std::vector<TokenId> &tokens() const { return tokens_; }

  // Copies the needed entries of a full vocabulary vector into column `col`.
  void gather(Eigen::Index col, const Vector &full);

  // Table over the first `columns` prompts.
  TokenTable head(Eigen::Index columns) const;

  const Matrix &values() const { return values_; }
  Eigen::Index cols() const { return values_.cols(); }

 private:
  std::vector<TokenId> tokens_;
  std::unordered_map<TokenId, Eigen::Index> rows_;
  Matrix values_;
};

// Anchors of `prompts` restricted to `tokens`.
TokenTable anchor_table(const MlmBackend &backend, std::span<const std::string> prompts,
                        std::vector<TokenId> tokens, AnchorInput mode,
                        AnchorCache *cache = nullptr);

struct ScoredConcept {
  ConceptCandidate candidate;
  std::vector<TokenId> token_ids;
  double lm_score = 0.0;
  // Indexed by class id.
  std::vector<double> class_scores;
};

// Labelled calibration support T_v (plus the ids of T_n, for provenance).
// by_class[y] lists the positions in t_v whose label is y.
struct SupportSets {
  std::vector<std::string> t_n;
  std::vector<std::string> t_v;
  std::vector<int> labels;
  std::vector<std::vector<std::size_t>> by_class;

  int num_classes() const { return static_cast<int>(by_class.size()); }

  // Validates labels against num_classes and requires every class to occur.
  static SupportSets partition(std::vector<std::string> t_n, std::vector<std::string> t_v,
                               std::vector<int> labels, int num_classes);
};

// One candidate per normalized surface; keeps the highest correlation and
// the union of source keys. Output is sorted by surface.
std::vector<ConceptCandidate> dedup_candidates(const std::vector<ConceptCandidate> &raw);

struct TokenizedConcepts {
  std::vector<ScoredConcept> concepts;
  std::vector<std::string> warnings;
};

// Tokenizes surfaces as word-initial text. Unknown-token ids are removed;
// concepts left with no tokens are dropped with a warning.
TokenizedConcepts tokenize_candidates(const MlmBackend &backend,
                                      const std::vector<ConceptCandidate> &candidates);

// Mean anchor mass of a concept's tokens.
double score_concept_lm(std::span<const TokenId> token_ids, const AnchorDistribution &anchor);
double score_concept_lm(const ScoredConcept &c, const AnchorDistribution &anchor);

struct LmCalibration {
  std::vector<ScoredConcept> survivors;
  std::vector<std::string> warnings;
};

// Scores every concept over all anchor columns and keeps the j best.
std::vector<ScoredConcept> lm_calibrate(std::vector<ScoredConcept> concepts,
                                        const TokenTable &anchors, std::size_t j);

LmCalibration lm_calibrate(const MlmBackend &backend,
                           const std::vector<ConceptCandidate> &candidates,
                           std::span<const std::string> prompts, std::size_t j,
                           const CalibrationOptions &options = {},
                           AnchorCache *cache = nullptr);

// One-vs-rest log-odds score of a single token for class y. anchor_row holds
// Q(t | x) for every support sample, in t_v order.
double token_class_score(const Eigen::Ref<const Vector> &anchor_row,
                         const SupportSets &support, int y);

// Scores of every table token (rows) for every class (columns).
Matrix token_class_scores(const TokenTable &anchors, const SupportSets &support);

// Fills class_scores of every concept.
void score_categories(std::vector<ScoredConcept> &concepts, const TokenTable &anchors,
                      const SupportSets &support,
                      ConceptReduction reduction = ConceptReduction::kMean);

// Top-l concepts of every class by class score, ties by ascending surface.
// Classes with fewer than l scored concepts keep all and get a warning.
Verbalizer select_label_words(const std::vector<ScoredConcept> &scored, int num_classes,
                              std::size_t l);

Verbalizer category_calibrate(std::vector<ScoredConcept> survivors,
                              const TokenTable &anchors, const SupportSets &support,
                              std::size_t l, const CalibrationOptions &options = {});

}  // namespace scverb

#endif  // SCVERB_CALIBRATION_HPP_
