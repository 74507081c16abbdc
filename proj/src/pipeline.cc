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

#include "scverb/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>

#include "scverb/error.hpp"
#include "scverb/mock_backend.hpp"
#include "scverb/remote_backend.hpp"
#include "scverb/support.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw ArgumentError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> merge_warnings(std::vector<std::string> a,
                                        const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](std::size_t v, const char *name) {
    if (v < 1) throw ArgumentError(std::string(name) + " must be >= 1");
  };
  positive(n, "n");
  positive(q, "q");
  if (!auto_j) positive(j, "j");
  positive(l, "l");
  positive(top_k, "top_k");
  if (num_classes && *num_classes < 2) throw ArgumentError("num_classes must be >= 2");
  prompt_template();
}

PromptTemplate RunConfig::prompt_template() const {
  if (template_pattern) {
    std::size_t limit = truncation_limit ? truncation_limit : 128;
    return PromptTemplate(template_id, *template_pattern, limit, task.value_or(TaskKind::kTopic));
  }
  const PromptTemplate &base = find_template(template_id);
  if (!truncation_limit && !task) return base;
  return PromptTemplate(base.id(), base.pattern(),
                        truncation_limit ? truncation_limit : base.truncation_limit(),
                        task.value_or(base.task()));
}

TaskKind RunConfig::task_kind() const { return prompt_template().task(); }

std::size_t RunConfig::effective_j(int classes) const {
  return auto_j ? l * static_cast<std::size_t>(classes) * 10 : j;
}

Hyperparameters RunConfig::hyperparameters() const {
  return {n, q, j, l, top_k, seed, std::string(to_string(calibration.anchor_input)),
          std::string(to_string(calibration.concept_reduction))};
}

std::unique_ptr<MlmBackend> make_backend(std::string_view spec) {
  std::string s(spec);
  if (s.empty()) {
    const char *env = std::getenv(kBackendEnv);
    s = env != nullptr && *env != '\0' ? env : "mock:0";
  }
  if (s.rfind("mock-config:", 0) == 0) {
    Json doc = Json::parse(read_file(s.substr(12)), nullptr, false);
    if (doc.is_discarded()) throw ArgumentError("mock config is not valid JSON");
    return std::make_unique<MockBackend>(mock_config_from_json(doc));
  }
  if (s.rfind("mock:", 0) == 0) {
    auto parts = split(s.substr(5), ':');
    MockConfig c;
    c.seed = parse_u64(parts[0], "mock seed");
    if (parts.size() > 1) c.vocab_size = static_cast<int>(parse_u64(parts[1], "mock vocab size"));
    if (parts.size() > 2) throw ArgumentError("backend spec is mock:<seed>[:<vocab>]");
    return std::make_unique<MockBackend>(c);
  }
  if (s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0)
    return std::make_unique<RemoteBackend>(s);
  throw ArgumentError("unrecognized backend '" + s + "'");
}

DatasetSchema schema_for(const PromptTemplate &tmpl, std::optional<int> num_classes) {
  return {tmpl.required_fields(), num_classes};
}

MiningResult mine(const ConceptGraph &graph, const std::vector<AnnotatedSpan> &spans,
                  const std::vector<Sample> &train, std::size_t n, std::uint64_t seed,
                  TaskKind task, std::size_t top_k) {
  MiningResult out;
  if (n > train.size()) {
    out.warnings.push_back("n = " + std::to_string(n) + " exceeds the training set; using " +
                           std::to_string(train.size()));
    n = train.size();
  }
  SupportSample draw = sample_support(train, n, derive_seed(seed, "key-extraction"), false);
  std::set<std::string> ids;
  for (std::size_t i : draw.indices) {
    out.t_n.push_back(train[i].id);
    ids.insert(train[i].id);
  }
  std::vector<AnnotatedSpan> selected;
  for (const auto &span : spans)
    if (ids.contains(span.sample_id)) selected.push_back(span);
  out.keys = build_key_set(selected, task);
  std::vector<ConceptCandidate> raw;
  for (const auto &key : out.keys.keys) {
    auto found = query_concepts(graph, key, top_k);
    raw.insert(raw.end(), found.begin(), found.end());
  }
  out.candidates = dedup_candidates(raw);
  return out;
}

CalibrationStage calibrate_on(const MlmBackend &backend,
                              const std::vector<ConceptCandidate> &candidates,
                              const std::vector<Sample> &t_v, int num_classes,
                              const PromptTemplate &tmpl, std::size_t j,
                              const CalibrationOptions &options,
                              std::vector<std::string> t_n) {
  CalibrationStage stage;
  std::vector<std::string> ids;
  for (const auto &s : t_v) {
    ids.push_back(s.id);
    stage.prompts.push_back(wrap_template(s, tmpl, backend));
  }
  stage.support = SupportSets::partition(std::move(t_n), std::move(ids), labels_of(t_v),
                                         num_classes);
  TokenizedConcepts tok = tokenize_candidates(backend, candidates);
  std::vector<TokenId> tokens;
  for (const auto &c : tok.concepts)
    tokens.insert(tokens.end(), c.token_ids.begin(), c.token_ids.end());
  stage.anchors = anchor_table(backend, stage.prompts, std::move(tokens), options.anchor_input);
  stage.survivors = lm_calibrate(std::move(tok.concepts), stage.anchors, j);
  stage.warnings = std::move(tok.warnings);
  return stage;
}

CalibrationStage calibrate(const MlmBackend &backend,
                           const std::vector<ConceptCandidate> &candidates,
                           const std::vector<Sample> &train, int num_classes,
                           const PromptTemplate &tmpl, std::size_t q, std::size_t j,
                           std::uint64_t seed, const CalibrationOptions &options,
                           std::vector<std::string> t_n) {
  SupportSample draw =
      sample_support(train, q, derive_seed(seed, "calibration"), true, num_classes);
  std::vector<Sample> t_v;
  for (std::size_t i : draw.indices) t_v.push_back(train[i]);
  return calibrate_on(backend, candidates, t_v, num_classes, tmpl, j, options, std::move(t_n));
}

Verbalizer build_verbalizer(const CalibrationStage &stage, std::size_t l,
                            const std::string &template_id, Hyperparameters hp,
                            const CalibrationOptions &options) {
  Verbalizer v = category_calibrate(stage.survivors, stage.anchors, stage.support, l, options);
  hp.l = l;
  hp.q = stage.support.t_v.size();
  v.template_id = template_id;
  v.hyperparameters = std::move(hp);
  v.warnings = merge_warnings(stage.warnings, v.warnings);
  return v;
}

std::vector<Prediction> classify(const MlmBackend &backend, const Verbalizer &verbalizer,
                                 const std::vector<Sample> &samples,
                                 const PromptTemplate &tmpl, Aggregation mode) {
  check_vocabulary(verbalizer, backend.meta().vocab_size);
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const auto &s : samples) {
    ClassScoreVector scores =
        class_scores(backend, verbalizer, wrap_template(s, tmpl, backend), mode);
    out.push_back({s.id, scores.argmax, std::move(scores.scores), s.label});
  }
  return out;
}

Json prediction_to_json(const Prediction &p) {
  Json scores = Json::object();
  for (const auto &[cls, v] : p.scores) scores[std::to_string(cls)] = v;
  Json doc = {{"id", p.id}, {"prediction", p.prediction}, {"scores", scores}};
  if (p.gold) doc["gold"] = *p.gold;
  return doc;
}

Prediction prediction_from_json(const Json &doc) {
  Prediction p;
  p.id = doc.at("id").get<std::string>();
  p.prediction = doc.at("prediction").get<int>();
  if (auto it = doc.find("scores"); it != doc.end())
    for (const auto &[k, v] : it->items()) p.scores[std::stoi(k)] = v.get<double>();
  if (auto it = doc.find("gold"); it != doc.end() && !it->is_null()) p.gold = it->get<int>();
  return p;
}

Report evaluate(const std::vector<int> &predictions, const std::vector<int> &golds,
                int num_classes) {
  Report r;
  r.micro_f1 = micro_f1(predictions, golds);
  r.per_class = per_class_counts(predictions, golds, num_classes);
  r.details["num_samples"] = predictions.size();
  return r;
}

Json report_to_json(const Report &r) {
  Json doc = r.details;
  doc["micro_f1"] = r.micro_f1;
  Json per_class = Json::object();
  for (std::size_t y = 0; y < r.per_class.size(); ++y)
    per_class[std::to_string(y)] = {{"gold", r.per_class[y].gold},
                                    {"predicted", r.per_class[y].predicted},
                                    {"correct", r.per_class[y].correct}};
  doc["per_class"] = per_class;
  return doc;
}

RunOutput run_zero_shot(const RunConfig &config) {
  config.validate();
  auto backend = make_backend(config.backend);
  return run_zero_shot(config, *backend);
}

RunOutput run_zero_shot(const RunConfig &config, const MlmBackend &backend) {
  config.validate();
  const PromptTemplate tmpl = config.prompt_template();
  const DatasetSchema schema = schema_for(tmpl, config.num_classes);
  Dataset train = load_dataset(config.train_path, schema);
  DatasetSchema test_schema = schema;
  test_schema.num_classes = train.num_classes;
  Dataset test = load_dataset(config.test_path, test_schema);
  const int k = train.num_classes;
  if (k < 2) throw ArgumentError("training data must have at least two classes");

  ConceptGraph graph = load_graph(config.kb_path);
  std::vector<AnnotatedSpan> spans = load_annotations(config.annotations_path);

  MiningResult mined = mine(graph, spans, train.samples, config.n, config.seed,
                            tmpl.task(), config.top_k);
  CalibrationStage stage =
      calibrate(backend, mined.candidates, train.samples, k, tmpl, config.q,
                config.effective_j(k), config.seed, config.calibration, mined.t_n);
  Hyperparameters hp = config.hyperparameters();
  hp.n = mined.t_n.size();
  hp.j = config.effective_j(k);
  RunOutput out;
  out.verbalizer = build_verbalizer(stage, config.l, tmpl.id(), hp, config.calibration);

  std::vector<Prediction> preds =
      classify(backend, out.verbalizer, test.samples, tmpl, config.aggregation);
  std::vector<int> predicted;
  for (const auto &p : preds) predicted.push_back(p.prediction);
  out.report = evaluate(predicted, labels_of(test.samples), k);

  out.verbalizer_path = config.output_dir / "verbalizer.json";
  out.predictions_path = config.output_dir / "predictions.jsonl";
  out.report_path = config.output_dir / "report.json";

  Json &d = out.report.details;
  d["template_id"] = tmpl.id();
  d["backend"] = backend.meta().model_id;
  d["hyperparameters"] = to_json(out.verbalizer)["hyperparameters"];
  d["aggregation"] = std::string(to_string(config.aggregation));
  d["num_keys"] = mined.keys.keys.size();
  d["num_candidates"] = mined.candidates.size();
  d["num_survivors"] = stage.survivors.size();
  d["verbalizer_path"] = out.verbalizer_path.filename().string();
  d["predictions_path"] = out.predictions_path.filename().string();
  d["warnings"] = merge_warnings(mined.warnings, out.verbalizer.warnings);

  std::string lines;
  for (const auto &p : preds) lines += dump_canonical_line(prediction_to_json(p)) + "\n";
  write_file(out.verbalizer_path, serialize(out.verbalizer));
  write_file(out.predictions_path, lines);
  write_file(out.report_path, dump_canonical(report_to_json(out.report)));
  return out;
}

}  // namespace scverb
