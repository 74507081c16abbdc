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

#ifndef SCVERB_PIPELINE_HPP_
#define SCVERB_PIPELINE_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scverb/annotations.hpp"
#include "scverb/backend.hpp"
#include "scverb/calibration.hpp"
#include "scverb/classifier.hpp"
#include "scverb/concept_graph.hpp"
#include "scverb/dataset.hpp"
#include "scverb/io.hpp"
#include "scverb/metrics.hpp"
#include "scverb/prompt_template.hpp"
#include "scverb/verbalizer.hpp"

namespace scverb {

// Environment variable naming the remote backend when --backend is not given.
inline constexpr const char *kBackendEnv = "ISCV_BACKEND_URL";

struct RunConfig {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path validation_path;  // optional, used by search
  std::filesystem::path annotations_path;
  std::filesystem::path kb_path;
  std::filesystem::path output_dir = "out";

  std::string template_id = "agnews-1";
  // A custom frame replaces the built-in one named by template_id.
  std::optional<std::string> template_pattern;
  std::size_t truncation_limit = 0;  // 0 keeps the template default
  std::optional<TaskKind> task;      // defaults to the template's task
  std::optional<int> num_classes;

  std::uint64_t seed = 144;
  std::size_t n = 4000;
  std::size_t q = 1100;
  std::size_t j = 10000;
  bool auto_j = false;  // j = l * classes * 10
  std::size_t l = 100;
  std::size_t top_k = 50;

  std::string backend;  // mock:<seed>[:<vocab>], mock-config:<file>, http://...
  Aggregation aggregation = Aggregation::kMean;
  CalibrationOptions calibration;

  std::size_t validation_size = 2000;
  // Search on the test split, as a literal reproduction of the original
  // protocol. Off by default since it leaks test labels into model selection.
  bool search_on_test = false;

  // Throws ArgumentError on non-positive counts or unknown template.
  void validate() const;
  PromptTemplate prompt_template() const;
  TaskKind task_kind() const;
  std::size_t effective_j(int num_classes) const;
  Hyperparameters hyperparameters() const;
};

// Backend from a spec string; an empty spec reads ISCV_BACKEND_URL and falls
// back to mock:0.
std::unique_ptr<MlmBackend> make_backend(std::string_view spec);

DatasetSchema schema_for(const PromptTemplate &tmpl, std::optional<int> num_classes);

struct MiningResult {
  std::vector<std::string> t_n;
  QueryKeySet keys;
  std::vector<ConceptCandidate> candidates;
  std::vector<std::string> warnings;
};

// Key extraction over a seeded sample of n training ids, then concept query
// and deduplication. n is capped at the training size with a warning.
MiningResult mine(const ConceptGraph &graph, const std::vector<AnnotatedSpan> &spans,
                  const std::vector<Sample> &train, std::size_t n, std::uint64_t seed,
                  TaskKind task, std::size_t top_k);

struct CalibrationStage {
  SupportSets support;
  std::vector<std::string> prompts;
  TokenTable anchors;
  std::vector<ScoredConcept> survivors;
  std::vector<std::string> warnings;
};

// Draws T_v (q labelled samples), builds anchors and applies the language
// model calibration.
CalibrationStage calibrate(const MlmBackend &backend,
                           const std::vector<ConceptCandidate> &candidates,
                           const std::vector<Sample> &train, int num_classes,
                           const PromptTemplate &tmpl, std::size_t q, std::size_t j,
                           std::uint64_t seed, const CalibrationOptions &options,
                           std::vector<std::string> t_n = {});

// Same, for an explicit calibration sample.
CalibrationStage calibrate_on(const MlmBackend &backend,
                              const std::vector<ConceptCandidate> &candidates,
                              const std::vector<Sample> &t_v, int num_classes,
                              const PromptTemplate &tmpl, std::size_t j,
                              const CalibrationOptions &options,
                              std::vector<std::string> t_n = {});

Verbalizer build_verbalizer(const CalibrationStage &stage, std::size_t l,
                            const std::string &template_id, Hyperparameters hp,
                            const CalibrationOptions &options);

struct Prediction {
  std::string id;
  int prediction = -1;
  std::map<int, double> scores;
  std::optional<int> gold;
};

std::vector<Prediction> classify(const MlmBackend &backend, const Verbalizer &verbalizer,
                                 const std::vector<Sample> &samples,
                                 const PromptTemplate &tmpl, Aggregation mode);

Json prediction_to_json(const Prediction &p);
Prediction prediction_from_json(const Json &doc);

struct Report {
  double micro_f1 = 0.0;
  std::vector<ClassCounts> per_class;
  Json details = Json::object();
};

Report evaluate(const std::vector<int> &predictions, const std::vector<int> &golds,
                int num_classes);
Json report_to_json(const Report &r);

struct RunOutput {
  Report report;
  Verbalizer verbalizer;
  std::filesystem::path verbalizer_path;
  std::filesystem::path report_path;
  std::filesystem::path predictions_path;
};

// mine -> calibrate -> build verbalizer -> classify the test split -> score.
// Writes verbalizer.json, predictions.jsonl and report.json to output_dir.
RunOutput run_zero_shot(const RunConfig &config);
RunOutput run_zero_shot(const RunConfig &config, const MlmBackend &backend);

struct CarvedSplit;

// Samples the hyperparameter search may score. It cannot be built from a
// test split except through literal_test_protocol.
class ValidationSplit {
 public:
  const std::vector<Sample> &samples() const { return samples_; }
  const std::string &origin() const { return origin_; }

  static ValidationSplit from_file(const std::filesystem::path &path,
                                   const DatasetSchema &schema);
  // Explicit opt-in to scoring the search on test data.
  static ValidationSplit literal_test_protocol(const Dataset &test);

 private:
  ValidationSplit(std::vector<Sample> samples, std::string origin)
      : samples_(std::move(samples)), origin_(std::move(origin)) {}
  friend CarvedSplit carve_validation(const std::vector<Sample> &, std::size_t,
                                      std::uint64_t);

  std::vector<Sample> samples_;
  std::string origin_;
};

struct CarvedSplit {
  std::vector<Sample> train;
  ValidationSplit validation;
};

// Seeded split of `size` samples off the training set; the rest stays train.
CarvedSplit carve_validation(const std::vector<Sample> &train, std::size_t size,
                             std::uint64_t seed);

struct GridCell {
  std::size_t q = 0;
  std::size_t l = 0;
  double micro_f1 = 0.0;
};

struct GridResult {
  std::string template_id;
  std::size_t best_q = 0;
  std::size_t best_l = 0;
  double best_micro_f1 = 0.0;
  std::vector<GridCell> cells;
};

// Default search ranges: q in 100..1500 step 100, l in {10} + 50..700 step 50.
std::vector<std::size_t> default_q_grid();
std::vector<std::size_t> default_l_grid();

// Scores every (q, l) pair on the validation split with the configured seed.
// Ranges are deduplicated; ties prefer smaller q, then smaller l.
GridResult grid_search(const MlmBackend &backend, const RunConfig &config,
                       const std::vector<Sample> &train, int num_classes,
                       const std::vector<ConceptCandidate> &candidates,
                       const ValidationSplit &validation, std::vector<std::size_t> q_values,
                       std::vector<std::size_t> l_values);

std::string grid_to_csv(const GridResult &grid);

// File-driven search: loads data, mines candidates, carves or loads the
// validation split, runs grid_search and writes grid-<template>.csv.
GridResult run_search(const RunConfig &config, const MlmBackend &backend,
                      std::vector<std::size_t> q_values, std::vector<std::size_t> l_values);

}  // namespace scverb

#endif  // SCVERB_PIPELINE_HPP_
