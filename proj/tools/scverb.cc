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

// Command-line front end for verbalizer construction and zero-shot
// classification.
//
//   scverb run --train train.jsonl --test test.jsonl --annotations ann.jsonl \
//       --kb concepts.tsv --template agnews-1 --backend mock:7 --out out/
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 backend failure.

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "scverb/error.hpp"
#include "scverb/mock_backend.hpp"
#include "scverb/pipeline.hpp"
#include "scverb/remote_backend.hpp"
#include "scverb/support.hpp"
#include "scverb/text.hpp"

namespace {

using namespace scverb;

constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;

struct Flags {
  RunConfig config;
  std::string task;
  std::string aggregation = "mean";
  std::string anchor_input = "probabilities";
  std::string concept_reduction = "mean";
  std::string j = "10000";
  int num_classes = 0;
  std::string output;
  std::string candidates_path;
  std::string survivors_path;
  std::string verbalizer_path;
  std::string dataset_path;
  std::string predictions_path;
  std::string q_values;
  std::string l_values;
  std::vector<std::string> templates;
  std::string host = "127.0.0.1";
  int port = 8080;
};

void add_backend(CLI::App *cmd, Flags &f) {
  cmd->add_option("--backend", f.config.backend,
                  "mock:<seed>[:<vocab>], mock-config:<file> or http://host:port "
                  "(default: $ISCV_BACKEND_URL, else mock:0)");
}

void add_template(CLI::App *cmd, Flags &f) {
  cmd->add_option("--template", f.config.template_id, "built-in template id, e.g. agnews-1");
  cmd->add_option("--template-pattern", f.config.template_pattern,
                  "custom frame with {mask} and {text}/{title}/{content}/{title_nopunct}");
  cmd->add_option("--truncation", f.config.truncation_limit,
                  "text truncation in backend tokens (default from template)");
  cmd->add_option("--task", f.task, "topic or sentiment (default from template)");
  cmd->add_option("--classes", f.num_classes, "number of classes (default: inferred)");
}

void add_common(CLI::App *cmd, Flags &f) {
  cmd->add_option("--seed", f.config.seed, "seed for every sampling step");
  cmd->add_option("--anchor-input", f.anchor_input, "probabilities or logits");
  cmd->add_option("--concept-reduction", f.concept_reduction, "mean or sum");
  cmd->add_option("--aggregation", f.aggregation, "first, mean or max");
}

void add_run_inputs(CLI::App *cmd, Flags &f) {
  cmd->add_option("--train", f.config.train_path, "training split (JSONL)")->required();
  cmd->add_option("--test", f.config.test_path, "test split (JSONL)");
  cmd->add_option("--validation", f.config.validation_path, "validation split (JSONL)");
  cmd->add_option("--annotations", f.config.annotations_path, "tagger output (JSONL)")->required();
  cmd->add_option("--kb", f.config.kb_path, "concept base TSV, optionally .gz")->required();
  cmd->add_option("--n", f.config.n, "key-extraction sample size");
  cmd->add_option("--q", f.config.q, "calibration support size");
  cmd->add_option("--j", f.j, "concepts kept after language model calibration, or 'auto'");
  cmd->add_option("--l", f.config.l, "label words per class");
  cmd->add_option("--top-k", f.config.top_k, "concepts per query key");
  cmd->add_option("--out", f.config.output_dir, "output directory");
}

void finalize(Flags &f) {
  if (!f.task.empty()) f.config.task = parse_task_kind(f.task);
  if (f.num_classes > 0) f.config.num_classes = f.num_classes;
  f.config.aggregation = parse_aggregation(f.aggregation);
  f.config.calibration.anchor_input = parse_anchor_input(f.anchor_input);
  f.config.calibration.concept_reduction = parse_concept_reduction(f.concept_reduction);
  if (f.j == "auto") {
    f.config.auto_j = true;
  } else {
    try {
      f.config.j = std::stoul(f.j);
    } catch (const std::exception &) {
      throw ArgumentError("--j must be a positive integer or 'auto'");
    }
  }
}

void emit(const std::string &path, const std::string &data) {
  if (path.empty() || path == "-") {
    std::cout << data;
  } else {
    write_file(path, data);
  }
}

std::vector<std::size_t> parse_list(const std::string &text, std::vector<std::size_t> fallback) {
  if (text.empty()) return fallback;
  std::vector<std::size_t> out;
  for (const auto &part : split(text, ',')) {
    std::string p = trim(part);
    // a:b:c expands to a, a+c, ..., <= b
    auto range = split(p, ':');
    try {
      if (range.size() == 3) {
        for (std::size_t v = std::stoul(range[0]); v <= std::stoul(range[1]); v += std::stoul(range[2]))
          out.push_back(v);
      } else {
        out.push_back(std::stoul(p));
      }
    } catch (const std::exception &) {
      throw ArgumentError("bad value list '" + text + "'");
    }
  }
  return out;
}

Dataset load_for(const Flags &f, const std::filesystem::path &path) {
  return load_dataset(path, schema_for(f.config.prompt_template(), f.config.num_classes));
}

Json candidates_json(const MiningResult &m) {
  Json list = Json::array();
  for (const auto &c : m.candidates)
    list.push_back({{"surface", c.surface}, {"source_key", c.source_key},
                    {"source_keys", c.source_keys}, {"correlation", c.correlation}});
  return {{"candidates", list}, {"keys", m.keys.keys}, {"t_n", m.t_n},
          {"warnings", m.warnings}};
}

std::vector<ConceptCandidate> candidates_from(const Json &doc, const char *key) {
  std::vector<ConceptCandidate> out;
  for (const auto &c : doc.at(key))
    out.push_back({c.at("surface").get<std::string>(), c.value("source_key", std::string()),
                   c.value("correlation", 1.0),
                   c.value("source_keys", std::vector<std::string>{})});
  return out;
}

Json load_json(const std::string &path) {
  Json doc = Json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw ParseError(0, path + " is not valid JSON");
  return doc;
}

int cmd_mine(Flags &f) {
  const PromptTemplate tmpl = f.config.prompt_template();
  Dataset train = load_for(f, f.config.train_path);
  MiningResult m = mine(load_graph(f.config.kb_path), load_annotations(f.config.annotations_path),
                        train.samples, f.config.n, f.config.seed, tmpl.task(), f.config.top_k);
  for (const auto &w : m.warnings) std::cerr << "warning: " << w << "\n";
  emit(f.output, dump_canonical(candidates_json(m)));
  return 0;
}

int cmd_calibrate(Flags &f) {
  auto backend = make_backend(f.config.backend);
  const PromptTemplate tmpl = f.config.prompt_template();
  Dataset train = load_for(f, f.config.train_path);
  Json cand = load_json(f.candidates_path);
  CalibrationStage stage = calibrate(
      *backend, candidates_from(cand, "candidates"), train.samples, train.num_classes, tmpl,
      f.config.q, f.config.effective_j(train.num_classes), f.config.seed, f.config.calibration,
      cand.value("t_n", std::vector<std::string>{}));
  for (const auto &w : stage.warnings) std::cerr << "warning: " << w << "\n";
  Json survivors = Json::array();
  for (const auto &c : stage.survivors)
    survivors.push_back({{"surface", c.candidate.surface},
                         {"source_key", c.candidate.source_key},
                         {"source_keys", c.candidate.source_keys},
                         {"correlation", c.candidate.correlation},
                         {"token_ids", c.token_ids},
                         {"lm_score", c.lm_score}});
  Json doc = {{"survivors", survivors},
              {"t_v", stage.support.t_v},
              {"t_n", stage.support.t_n},
              {"num_classes", train.num_classes},
              {"template_id", tmpl.id()},
              {"hyperparameters", to_json(Verbalizer{tmpl.id(), f.config.hyperparameters(), {}, {}})
                                      .at("hyperparameters")}};
  doc["hyperparameters"]["n"] = stage.support.t_n.size();
  doc["hyperparameters"]["j"] = f.config.effective_j(train.num_classes);
  emit(f.output, dump_canonical(doc));
  return 0;
}

int cmd_build(Flags &f) {
  auto backend = make_backend(f.config.backend);
  const PromptTemplate tmpl = f.config.prompt_template();
  Dataset train = load_for(f, f.config.train_path);
  Json doc = load_json(f.survivors_path);
  std::map<std::string, const Sample *> by_id;
  for (const auto &s : train.samples) by_id[s.id] = &s;
  std::vector<Sample> t_v;
  for (const auto &id : doc.at("t_v").get<std::vector<std::string>>()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ArgumentError("calibration sample '" + id + "' not in --train");
    t_v.push_back(*it->second);
  }
  auto survivors = candidates_from(doc, "survivors");
  const int k = doc.value("num_classes", train.num_classes);
  CalibrationStage stage = calibrate_on(*backend, survivors, t_v, k, tmpl,
                                        std::max<std::size_t>(survivors.size(), 1),
                                        f.config.calibration,
                                        doc.value("t_n", std::vector<std::string>{}));
  Hyperparameters hp = verbalizer_from_json({{"template_id", tmpl.id()},
                                             {"hyperparameters", doc.at("hyperparameters")},
                                             {"classes", Json::object()}})
                           .hyperparameters;
  Verbalizer v = build_verbalizer(stage, f.config.l, tmpl.id(), hp, f.config.calibration);
  for (const auto &w : v.warnings) std::cerr << "warning: " << w << "\n";
  emit(f.output, serialize(v));
  return 0;
}

int cmd_classify(Flags &f) {
  auto backend = make_backend(f.config.backend);
  Verbalizer v = verbalizer_from_json(load_json(f.verbalizer_path));
  if (f.config.template_id == RunConfig{}.template_id && !f.config.template_pattern)
    f.config.template_id = v.template_id;
  const PromptTemplate tmpl = f.config.prompt_template();
  DatasetSchema schema = schema_for(tmpl, static_cast<int>(v.per_class.size()));
  Dataset data = load_dataset(f.dataset_path, schema);
  std::string lines;
  for (const auto &p : classify(*backend, v, data.samples, tmpl, f.config.aggregation))
    lines += dump_canonical_line(prediction_to_json(p)) + "\n";
  emit(f.output, lines);
  return 0;
}

int cmd_evaluate(Flags &f) {
  std::map<std::string, int> golds_by_id;
  int k = f.num_classes;
  if (!f.dataset_path.empty()) {
    Dataset data = load_for(f, f.dataset_path);
    k = std::max(k, data.num_classes);
    for (const auto &s : data.samples)
      if (s.label) golds_by_id[s.id] = *s.label;
  }
  std::vector<int> preds, golds;
  std::size_t lineno = 0;
  for (const auto &line : read_lines(f.predictions_path)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Json rec = Json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw ParseError(lineno, "not a JSON object");
    Prediction p = prediction_from_json(rec);
    if (auto it = golds_by_id.find(p.id); it != golds_by_id.end()) p.gold = it->second;
    if (!p.gold) throw ParseError(lineno, "no gold label for '" + p.id + "'");
    preds.push_back(p.prediction);
    golds.push_back(*p.gold);
    k = std::max({k, p.prediction + 1, *p.gold + 1});
  }
  emit(f.output, dump_canonical(report_to_json(evaluate(preds, golds, k))));
  return 0;
}

int cmd_search(Flags &f) {
  auto backend = make_backend(f.config.backend);
  std::vector<std::string> ids = f.templates;
  if (ids.empty()) ids.push_back(f.config.template_id);
  Json per_template = Json::object();
  double total = 0.0;
  for (const auto &id : ids) {
    RunConfig cfg = f.config;
    cfg.template_id = id;
    GridResult g = run_search(cfg, *backend, parse_list(f.q_values, default_q_grid()),
                              parse_list(f.l_values, default_l_grid()));
    per_template[id] = {{"best_q", g.best_q}, {"best_l", g.best_l},
                        {"micro_f1", g.best_micro_f1},
                        {"grid_path", "grid-" + id + ".csv"}};
    total += g.best_micro_f1;
  }
  Json summary = {{"templates", per_template},
                  {"mean_best_micro_f1", total / static_cast<double>(ids.size())},
                  {"seed", f.config.seed},
                  {"split", f.config.search_on_test ? "test"
                                                    : (f.config.validation_path.empty()
                                                           ? "carved-validation"
                                                           : "validation")}};
  std::string text = dump_canonical(summary);
  write_file(f.config.output_dir / "search.json", text);
  std::cout << text;
  return 0;
}

int cmd_run(Flags &f) {
  if (f.config.test_path.empty()) throw ArgumentError("--test is required");
  RunOutput out = run_zero_shot(f.config);
  for (const auto &w : out.verbalizer.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << dump_canonical(report_to_json(out.report));
  return 0;
}

int cmd_convert(Flags &f) {
  std::ifstream in(f.dataset_path);
  if (!in) throw ArgumentError("cannot open " + f.dataset_path);
  emit(f.output, convert_tagger_dump(in));
  return 0;
}

int cmd_serve(Flags &f) {
  auto backend = make_backend(f.config.backend);
  BackendServer server(*backend);
  std::cerr << "serving " << backend->meta().model_id << " on " << f.host << ":" << f.port << "\n";
  server.listen(f.host, f.port);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Concept-based verbalizer construction for zero-shot prompt classification"};
  app.require_subcommand(1);
  Flags f;

  auto *mine = app.add_subcommand("mine", "annotations + concept base -> candidate concepts");
  mine->add_option("--train", f.config.train_path, "training split (JSONL)")->required();
  mine->add_option("--annotations", f.config.annotations_path, "tagger output (JSONL)")->required();
  mine->add_option("--kb", f.config.kb_path, "concept base TSV")->required();
  mine->add_option("--n", f.config.n, "key-extraction sample size");
  mine->add_option("--top-k", f.config.top_k, "concepts per query key");
  mine->add_option("--seed", f.config.seed, "sampling seed");
  mine->add_option("-o,--output", f.output, "candidates JSON (default stdout)");
  add_template(mine, f);

  auto *cal = app.add_subcommand("calibrate", "candidates + support -> scored survivors");
  cal->add_option("--candidates", f.candidates_path, "output of mine")->required();
  cal->add_option("--train", f.config.train_path, "training split (JSONL)")->required();
  cal->add_option("--q", f.config.q, "calibration support size");
  cal->add_option("--j", f.j, "survivors to keep, or 'auto'");
  cal->add_option("--l", f.config.l, "label words per class (only for --j auto)");
  cal->add_option("-o,--output", f.output, "survivors JSON (default stdout)");
  add_template(cal, f);
  add_backend(cal, f);
  add_common(cal, f);

  auto *build = app.add_subcommand("build-verbalizer", "survivors -> verbalizer");
  build->add_option("--survivors", f.survivors_path, "output of calibrate")->required();
  build->add_option("--train", f.config.train_path, "training split (JSONL)")->required();
  build->add_option("--l", f.config.l, "label words per class");
  build->add_option("-o,--output", f.output, "verbalizer JSON (default stdout)");
  add_template(build, f);
  add_backend(build, f);
  add_common(build, f);

  auto *cls = app.add_subcommand("classify", "verbalizer + dataset -> predictions JSONL");
  cls->add_option("--verbalizer", f.verbalizer_path, "verbalizer JSON")->required();
  cls->add_option("--dataset", f.dataset_path, "samples to classify (JSONL)")->required();
  cls->add_option("-o,--output", f.output, "predictions JSONL (default stdout)");
  add_template(cls, f);
  add_backend(cls, f);
  add_common(cls, f);

  auto *ev = app.add_subcommand("evaluate", "predictions + golds -> report");
  ev->add_option("--predictions", f.predictions_path, "predictions JSONL")->required();
  ev->add_option("--dataset", f.dataset_path, "gold labels, matched by id");
  ev->add_option("-o,--output", f.output, "report JSON (default stdout)");
  add_template(ev, f);

  auto *search = app.add_subcommand("search", "q-l grid search on a validation split");
  add_run_inputs(search, f);
  add_backend(search, f);
  add_common(search, f);
  search->add_option("--template", f.templates, "template ids; repeat to tune several");
  search->add_option("--template-pattern", f.config.template_pattern, "custom frame");
  search->add_option("--truncation", f.config.truncation_limit, "truncation in tokens");
  search->add_option("--task", f.task, "topic or sentiment");
  search->add_option("--classes", f.num_classes, "number of classes");
  search->add_option("--q-values", f.q_values, "comma list or start:stop:step (default 100:1500:100)");
  search->add_option("--l-values", f.l_values, "comma list or start:stop:step (default 10,50:700:50)");
  search->add_option("--validation-size", f.config.validation_size, "carved validation size");
  search->add_flag("--search-on-test", f.config.search_on_test,
                   "score the grid on --test (literal reproduction; leaks test labels)");

  auto *run = app.add_subcommand("run", "end-to-end: mine, calibrate, classify, evaluate");
  add_run_inputs(run, f);
  add_template(run, f);
  add_backend(run, f);
  add_common(run, f);

  auto *conv = app.add_subcommand("convert-annotations",
                                  "sample_id<TAB>surface<TAB>tag rows -> annotation JSONL");
  conv->add_option("--input", f.dataset_path, "tagger dump")->required();
  conv->add_option("-o,--output", f.output, "annotation JSONL (default stdout)");

  auto *serve = app.add_subcommand("serve-mock", "serve a backend over the HTTP protocol");
  add_backend(serve, f);
  serve->add_option("--host", f.host, "bind address");
  serve->add_option("--port", f.port, "port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    finalize(f);
    if (*mine) return cmd_mine(f);
    if (*cal) return cmd_calibrate(f);
    if (*build) return cmd_build(f);
    if (*cls) return cmd_classify(f);
    if (*ev) return cmd_evaluate(f);
    if (*search) return cmd_search(f);
    if (*run) return cmd_run(f);
    if (*conv) return cmd_convert(f);
    if (*serve) return cmd_serve(f);
  } catch (const TransportError &e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
