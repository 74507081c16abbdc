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

#include "scverb/calibration.hpp"

#include <algorithm>
#include <set>

#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

bool better(double sa, const std::string &a, double sb, const std::string &b) {
  if (sa != sb) return sa > sb;
  return a < b;
}

std::vector<TokenId> unique_tokens(const std::vector<ScoredConcept> &concepts) {
  std::vector<TokenId> tokens;
  for (const auto &c : concepts)
    tokens.insert(tokens.end(), c.token_ids.begin(), c.token_ids.end());
  return tokens;
}

}  // namespace

AnchorInput parse_anchor_input(std::string_view name) {
  if (name == "probabilities") return AnchorInput::kProbabilities;
  if (name == "logits") return AnchorInput::kLogits;
  throw ArgumentError("anchor input must be probabilities or logits, got '" +
                      std::string(name) + "'");
}

ConceptReduction parse_concept_reduction(std::string_view name) {
  if (name == "mean") return ConceptReduction::kMean;
  if (name == "sum") return ConceptReduction::kSum;
  throw ArgumentError("concept reduction must be mean or sum, got '" +
                      std::string(name) + "'");
}

std::string_view to_string(AnchorInput mode) {
  return mode == AnchorInput::kProbabilities ? "probabilities" : "logits";
}

std::string_view to_string(ConceptReduction mode) {
  return mode == ConceptReduction::kMean ? "mean" : "sum";
}

AnchorDistribution make_anchor(const MaskDistribution &dist, AnchorInput mode) {
  if (mode == AnchorInput::kProbabilities)
    return {softmax(dist.probs), dist.prompt_digest};
  Vector logp = dist.probs.array().max(1e-300).log().matrix();
  return {softmax(logp), dist.prompt_digest};
}

std::shared_ptr<const AnchorDistribution> AnchorCache::find(std::uint64_t digest,
                                                            AnchorInput mode) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find({digest, static_cast<int>(mode)});
  return it == map_.end() ? nullptr : it->second;
}

std::shared_ptr<const AnchorDistribution> AnchorCache::insert(std::uint64_t digest,
                                                              AnchorInput mode,
                                                              AnchorDistribution anchor) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = map_.try_emplace(
      {digest, static_cast<int>(mode)},
      std::make_shared<const AnchorDistribution>(std::move(anchor)));
  return it->second;
}

std::size_t AnchorCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

AnchorDistribution compute_anchor(const MlmBackend &backend, std::string_view prompt,
                                  AnchorInput mode, AnchorCache *cache) {
  const std::uint64_t digest = prompt_digest(prompt);
  if (cache != nullptr) {
    if (auto hit = cache->find(digest, mode)) return *hit;
  }
  AnchorDistribution anchor = make_anchor(backend.mask_distribution(prompt), mode);
  if (cache != nullptr) return *cache->insert(digest, mode, anchor);
  return anchor;
}

TokenTable::TokenTable(std::vector<TokenId> tokens, Eigen::Index columns) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens_ = std::move(tokens);
  for (std::size_t r = 0; r < tokens_.size(); ++r)
    rows_.emplace(tokens_[r], static_cast<Eigen::Index>(r));
  values_ = Matrix::Zero(static_cast<Eigen::Index>(tokens_.size()), columns);
}

Eigen::Index TokenTable::row(TokenId token) const {
  auto it = rows_.find(token);
  if (it == rows_.end())
    throw ArgumentError("token " + std::to_string(token) + " is not in the table");
  return it->second;
}

void TokenTable::gather(Eigen::Index col, const Vector &full) {
  for (std::size_t r = 0; r < tokens_.size(); ++r) {
    if (tokens_[r] < 0 || tokens_[r] >= full.size())
      throw ConfigError("token " + std::to_string(tokens_[r]) +
                        " outside vocabulary of " + std::to_string(full.size()));
    values_(static_cast<Eigen::Index>(r), col) = full(tokens_[r]);
  }
}

TokenTable TokenTable::head(Eigen::Index columns) const {
  if (columns > cols()) throw ArgumentError("table has fewer columns than requested");
  TokenTable out;
  out.tokens_ = tokens_;
  out.rows_ = rows_;
  out.values_ = values_.leftCols(columns);
  return out;
}

TokenTable anchor_table(const MlmBackend &backend, std::span<const std::string> prompts,
                        std::vector<TokenId> tokens, AnchorInput mode,
                        AnchorCache *cache) {
  TokenTable table(std::move(tokens), static_cast<Eigen::Index>(prompts.size()));
  for (std::size_t s = 0; s < prompts.size(); ++s)
    table.gather(static_cast<Eigen::Index>(s),
                 compute_anchor(backend, prompts[s], mode, cache).q);
  return table;
}

SupportSets SupportSets::partition(std::vector<std::string> t_n,
                                   std::vector<std::string> t_v,
                                   std::vector<int> labels, int num_classes) {
  if (num_classes < 1) throw ArgumentError("num_classes must be >= 1");
  if (labels.size() != t_v.size())
    throw ArgumentError("one label per calibration sample is required");
  SupportSets out{std::move(t_n), std::move(t_v), std::move(labels),
                  std::vector<std::vector<std::size_t>>(num_classes)};
  for (std::size_t s = 0; s < out.labels.size(); ++s) {
    int y = out.labels[s];
    if (y < 0 || y >= num_classes)
      throw ArgumentError("label " + std::to_string(y) + " outside [0, " +
                          std::to_string(num_classes) + ")");
    out.by_class[y].push_back(s);
  }
  for (int y = 0; y < num_classes; ++y)
    if (out.by_class[y].empty())
      throw ArgumentError("class " + std::to_string(y) +
                          " has no calibration sample; increase q");
  return out;
}

std::vector<ConceptCandidate> dedup_candidates(const std::vector<ConceptCandidate> &raw) {
  std::map<std::string, ConceptCandidate> merged;
  std::map<std::string, std::set<std::string>> keys;
  for (const auto &c : raw) {
    std::string surface = normalize_key(c.surface);
    if (surface.empty()) continue;
    auto &k = keys[surface];
    k.insert(c.source_key);
    k.insert(c.source_keys.begin(), c.source_keys.end());
    auto [it, inserted] = merged.try_emplace(surface, c);
    ConceptCandidate &kept = it->second;
    if (inserted) {
      kept.surface = surface;
      continue;
    }
    if (c.correlation > kept.correlation ||
        (c.correlation == kept.correlation && c.source_key < kept.source_key)) {
      kept.correlation = c.correlation;
      kept.source_key = c.source_key;
    }
  }
  std::vector<ConceptCandidate> out;
  out.reserve(merged.size());
  for (auto &[surface, c] : merged) {
    c.source_keys.assign(keys[surface].begin(), keys[surface].end());
    out.push_back(std::move(c));
  }
  return out;
}

TokenizedConcepts tokenize_candidates(const MlmBackend &backend,
                                      const std::vector<ConceptCandidate> &candidates) {
  const BackendMeta meta = backend.meta();
  TokenizedConcepts out;
  for (const auto &c : candidates) {
    std::vector<TokenId> ids;
    if (!trim(c.surface).empty()) ids = backend.tokenize(c.surface, true);
    for (TokenId t : ids)
      if (t < 0 || t >= meta.vocab_size)
        throw ConfigError("token id " + std::to_string(t) + " of '" + c.surface +
                          "' outside vocabulary");
    if (meta.unk_token_id)
      std::erase(ids, *meta.unk_token_id);
    if (ids.empty()) {
      out.warnings.push_back("dropped concept '" + c.surface +
                             "': no in-vocabulary tokens");
      continue;
    }
    out.concepts.push_back({c, std::move(ids), 0.0, {}});
  }
  return out;
}

double score_concept_lm(std::span<const TokenId> token_ids, const AnchorDistribution &anchor) {
  if (token_ids.empty()) throw ArgumentError("concept has no tokens");
  for (TokenId t : token_ids)
    if (t < 0 || t >= anchor.q.size())
      throw ArgumentError("token " + std::to_string(t) + " outside anchor");
  return mean_at(anchor.q, token_ids);
}

double score_concept_lm(const ScoredConcept &c, const AnchorDistribution &anchor) {
  return score_concept_lm(c.token_ids, anchor);
}

std::vector<ScoredConcept> lm_calibrate(std::vector<ScoredConcept> concepts,
                                        const TokenTable &anchors, std::size_t j) {
  if (j < 1) throw ArgumentError("j must be >= 1");
  if (anchors.cols() < 1) throw ArgumentError("calibration support is empty");
  // Summing over prompts first: sum_x mean_t Q = mean_t sum_x Q.
  const Vector mass = anchors.values().rowwise().sum();
  for (auto &c : concepts) {
    if (c.token_ids.empty()) throw ArgumentError("concept '" + c.candidate.surface + "' has no tokens");
    double acc = 0.0;
    for (TokenId t : c.token_ids) acc += mass(anchors.row(t));
    c.lm_score = acc / static_cast<double>(c.token_ids.size());
  }
  std::sort(concepts.begin(), concepts.end(), [](const ScoredConcept &a, const ScoredConcept &b) {
    return better(a.lm_score, a.candidate.surface, b.lm_score, b.candidate.surface);
  });
  if (concepts.size() > j) concepts.resize(j);
  return concepts;
}

LmCalibration lm_calibrate(const MlmBackend &backend,
                           const std::vector<ConceptCandidate> &candidates,
                           std::span<const std::string> prompts, std::size_t j,
                           const CalibrationOptions &options, AnchorCache *cache) {
  if (prompts.empty()) throw ArgumentError("calibration support is empty");
  TokenizedConcepts tok = tokenize_candidates(backend, candidates);
  TokenTable anchors = anchor_table(backend, prompts, unique_tokens(tok.concepts),
                                    options.anchor_input, cache);
  return {lm_calibrate(std::move(tok.concepts), anchors, j), std::move(tok.warnings)};
}

double token_class_score(const Eigen::Ref<const Vector> &anchor_row,
                         const SupportSets &support, int y) {
  if (y < 0 || y >= support.num_classes() || support.by_class[y].empty())
    throw ArgumentError("class " + std::to_string(y) + " has no positive samples");
  if (anchor_row.size() != static_cast<Eigen::Index>(support.labels.size()))
    throw ArgumentError("anchor row does not match the support set");
  const Vector odds = clamped_log_odds(anchor_row);
  double score = 0.0;
  for (std::size_t s = 0; s < support.labels.size(); ++s)
    score += support.labels[s] == y ? odds(s) : -odds(s);
  return score;
}

Matrix token_class_scores(const TokenTable &anchors, const SupportSets &support) {
  if (anchors.cols() != static_cast<Eigen::Index>(support.labels.size()))
    throw ArgumentError("anchor table does not match the support set");
  for (int y = 0; y < support.num_classes(); ++y)
    if (support.by_class[y].empty())
      throw ArgumentError("class " + std::to_string(y) + " has no positive samples");
  return clamped_log_odds(anchors.values()) * role_matrix(support.labels, support.num_classes());
}

void score_categories(std::vector<ScoredConcept> &concepts, const TokenTable &anchors,
                      const SupportSets &support, ConceptReduction reduction) {
  const Matrix scores = token_class_scores(anchors, support);
  const int k = support.num_classes();
  for (auto &c : concepts) {
    if (c.token_ids.empty()) throw ArgumentError("concept '" + c.candidate.surface + "' has no tokens");
    c.class_scores.assign(k, 0.0);
    for (int y = 0; y < k; ++y) {
      double acc = 0.0;
      for (TokenId t : c.token_ids) acc += scores(anchors.row(t), y);
      c.class_scores[y] = reduction == ConceptReduction::kMean
                              ? acc / static_cast<double>(c.token_ids.size())
                              : acc;
    }
  }
}

Verbalizer select_label_words(const std::vector<ScoredConcept> &scored, int num_classes,
                              std::size_t l) {
  if (l < 1) throw ArgumentError("l must be >= 1");
  Verbalizer v;
  std::vector<const ScoredConcept *> order;
  order.reserve(scored.size());
  for (const auto &c : scored) order.push_back(&c);
  for (int y = 0; y < num_classes; ++y) {
    const std::size_t keep = std::min(l, order.size());
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [y](const ScoredConcept *a, const ScoredConcept *b) {
                        return better(a->class_scores.at(y), a->candidate.surface,
                                      b->class_scores.at(y), b->candidate.surface);
                      });
    auto &words = v.per_class[y];
    for (std::size_t i = 0; i < keep; ++i)
      words.push_back({order[i]->candidate.surface, order[i]->token_ids,
                       order[i]->class_scores[y]});
    if (keep < l)
      v.warnings.push_back("class " + std::to_string(y) + " has " + std::to_string(keep) +
                           " label words, fewer than l = " + std::to_string(l));
  }
  return v;
}

Verbalizer category_calibrate(std::vector<ScoredConcept> survivors,
                              const TokenTable &anchors, const SupportSets &support,
                              std::size_t l, const CalibrationOptions &options) {
  if (l < 1) throw ArgumentError("l must be >= 1");
  score_categories(survivors, anchors, support, options.concept_reduction);
  Verbalizer v = select_label_words(survivors, support.num_classes(), l);
  v.hyperparameters.l = l;
  v.hyperparameters.q = support.t_v.size();
  v.hyperparameters.anchor_input = std::string(to_string(options.anchor_input));
  v.hyperparameters.concept_reduction = std::string(to_string(options.concept_reduction));
  return v;
}

}  // namespace scverb
