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

#include <algorithm>
#include <set>

#include "scverb/error.hpp"
#include "scverb/pipeline.hpp"
#include "scverb/support.hpp"

namespace scverb {

namespace {

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v, const char *name) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.empty()) throw ArgumentError(std::string(name) + " range is empty");
  if (v.front() < 1) throw ArgumentError(std::string(name) + " values must be >= 1");
  return v;
}

}  // namespace

ValidationSplit ValidationSplit::from_file(const std::filesystem::path &path,
                                           const DatasetSchema &schema) {
  return ValidationSplit(load_dataset(path, schema).samples, path.string());
}

ValidationSplit ValidationSplit::literal_test_protocol(const Dataset &test) {
  return ValidationSplit(test.samples, "test");
}

CarvedSplit carve_validation(const std::vector<Sample> &train, std::size_t size,
                             std::uint64_t seed) {
  if (size < 1 || size >= train.size())
    throw ArgumentError("validation size must be in [1, " + std::to_string(train.size()) + ")");
  std::vector<std::size_t> perm = seeded_permutation(train.size(), derive_seed(seed, "validation"));
  std::vector<bool> held(train.size(), false);
  for (std::size_t i = 0; i < size; ++i) held[perm[i]] = true;
  std::vector<Sample> rest, val;
  // Both halves keep the original file order.
  for (std::size_t i = 0; i < train.size(); ++i) (held[i] ? val : rest).push_back(train[i]);
  return {std::move(rest), ValidationSplit(std::move(val), "carved")};
}

std::vector<std::size_t> default_q_grid() {
  std::vector<std::size_t> q;
  for (std::size_t v = 100; v <= 1500; v += 100) q.push_back(v);
  return q;
}

std::vector<std::size_t> default_l_grid() {
  std::vector<std::size_t> l = {10};
  for (std::size_t v = 50; v <= 700; v += 50) l.push_back(v);
  return l;
}

GridResult grid_search(const MlmBackend &backend, const RunConfig &config,
                       const std::vector<Sample> &train, int num_classes,
                       const std::vector<ConceptCandidate> &candidates,
                       const ValidationSplit &validation, std::vector<std::size_t> q_values,
                       std::vector<std::size_t> l_values) {
  q_values = sorted_unique(std::move(q_values), "q");
  l_values = sorted_unique(std::move(l_values), "l");
  const PromptTemplate tmpl = config.prompt_template();
  const std::vector<Sample> &val = validation.samples();
  if (val.empty()) throw ArgumentError("validation split is empty");
  const std::vector<int> golds = labels_of(val);

  TokenizedConcepts tok = tokenize_candidates(backend, candidates);
  std::vector<TokenId> tokens;
  for (const auto &c : tok.concepts)
    tokens.insert(tokens.end(), c.token_ids.begin(), c.token_ids.end());

  // Calibration samples for every q are prefixes of one seeded draw, so the
  // anchors are computed once for the largest q.
  const std::size_t max_q = q_values.back();
  if (max_q > train.size())
    throw ArgumentError("q = " + std::to_string(max_q) + " exceeds the training set");
  SupportSample draw =
      sample_support(train, max_q, derive_seed(config.seed, "calibration"), false);
  std::vector<std::string> prompts;
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (std::size_t i : draw.indices) {
    prompts.push_back(wrap_template(train[i], tmpl, backend));
    ids.push_back(train[i].id);
    labels.push_back(train[i].label.value_or(-1));
  }
  const TokenTable all_anchors =
      anchor_table(backend, prompts, tokens, config.calibration.anchor_input);

  TokenTable val_probs(tokens, static_cast<Eigen::Index>(val.size()));
  for (std::size_t s = 0; s < val.size(); ++s)
    val_probs.gather(static_cast<Eigen::Index>(s),
                     backend.mask_distribution(wrap_template(val[s], tmpl, backend)).probs);

  GridResult result;
  result.template_id = tmpl.id();
  bool have_best = false;
  for (std::size_t q : q_values) {
    SupportSets support = SupportSets::partition(
        {}, {ids.begin(), ids.begin() + q}, {labels.begin(), labels.begin() + q}, num_classes);
    const TokenTable anchors = all_anchors.head(static_cast<Eigen::Index>(q));
    std::size_t scored_j = 0;
    std::vector<ScoredConcept> survivors;
    for (std::size_t l : l_values) {
      RunConfig cell = config;
      cell.l = l;
      const std::size_t j = cell.effective_j(num_classes);
      if (survivors.empty() || j != scored_j) {
        survivors = lm_calibrate(tok.concepts, anchors, j);
        score_categories(survivors, anchors, support, config.calibration.concept_reduction);
        scored_j = j;
      }
      Verbalizer v = select_label_words(survivors, num_classes, l);
      std::vector<int> preds(val.size());
      for (std::size_t s = 0; s < val.size(); ++s) {
        const auto col = static_cast<Eigen::Index>(s);
        preds[s] = class_scores_with(v, config.aggregation, [&](TokenId t) {
                     return val_probs.values()(val_probs.row(t), col);
                   }).argmax;
      }
      const double f1 = micro_f1(preds, golds);
      result.cells.push_back({q, l, f1});
      if (!have_best || f1 > result.best_micro_f1) {
        have_best = true;
        result.best_q = q;
        result.best_l = l;
        result.best_micro_f1 = f1;
      }
    }
  }
  return result;
}

std::string grid_to_csv(const GridResult &grid) {
  std::string out = "template_id,q,l,micro_f1\n";
  for (const auto &c : grid.cells)
    out += grid.template_id + "," + std::to_string(c.q) + "," + std::to_string(c.l) + "," +
           format_double(c.micro_f1) + "\n";
  return out;
}

GridResult run_search(const RunConfig &config, const MlmBackend &backend,
                      std::vector<std::size_t> q_values, std::vector<std::size_t> l_values) {
  config.validate();
  const PromptTemplate tmpl = config.prompt_template();
  const DatasetSchema schema = schema_for(tmpl, config.num_classes);
  Dataset train = load_dataset(config.train_path, schema);
  DatasetSchema fixed = schema;
  fixed.num_classes = train.num_classes;

  std::vector<Sample> pool = train.samples;
  std::optional<ValidationSplit> validation;
  if (config.search_on_test) {
    validation = ValidationSplit::literal_test_protocol(load_dataset(config.test_path, fixed));
  } else if (!config.validation_path.empty()) {
    validation = ValidationSplit::from_file(config.validation_path, fixed);
  } else {
    CarvedSplit carved = carve_validation(
        train.samples, std::min(config.validation_size, train.size() / 2), config.seed);
    pool = std::move(carved.train);
    validation = std::move(carved.validation);
  }

  ConceptGraph graph = load_graph(config.kb_path);
  MiningResult mined = mine(graph, load_annotations(config.annotations_path), pool, config.n,
                            config.seed, tmpl.task(), config.top_k);
  GridResult grid = grid_search(backend, config, pool, train.num_classes, mined.candidates,
                                *validation, std::move(q_values), std::move(l_values));
  write_file(config.output_dir / ("grid-" + tmpl.id() + ".csv"), grid_to_csv(grid));
  return grid;
}

}  // namespace scverb
