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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "cascade_check.hpp"
#include "goldens.hpp"
#include "scverb/calibration.hpp"
#include "scverb/metrics.hpp"
#include "scverb/mock_backend.hpp"
#include "scverb/pipeline.hpp"
#include "synthetic.hpp"
#include "test_backends.hpp"

namespace {

using namespace scverb;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kOracleInstances = 100;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr int kAnchorPrompts = 200;
constexpr double kAnchorSumTolerance = 1e-9;
constexpr double kLogNineTolerance = 1e-12;
constexpr double kSeparabilityRatio = 10.0;
constexpr double kChanceTolerance = 0.10;
constexpr double kEndToEndBudgetSeconds = 120.0;
constexpr int kMetricTrials = 1000;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome oracle_equivalence() {
  auto start = Clock::now();
  std::mt19937_64 gen(144);
  int agree = 0;
  std::string first_failure;
  for (int i = 0; i < kOracleInstances; ++i) {
    auto inst = scverb::testing::random_instance(gen);
    std::string diff = scverb::testing::compare_with_oracle(inst);
    if (diff.empty())
      ++agree;
    else if (first_failure.empty())
      first_failure = "instance " + std::to_string(i) + ": " + diff;
  }
  const double t = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d instances agree, %.2f s (budget %.0f s)", agree,
                kOracleInstances, t, kOracleBudgetSeconds);
  return {agree == kOracleInstances && t < kOracleBudgetSeconds,
          buf + (first_failure.empty() ? "" : "; " + first_failure)};
}

Outcome anchor_normalization() {
  std::mt19937_64 gen(7);
  double worst = 0.0;
  bool positive = true;
  for (int i = 0; i < kAnchorPrompts; ++i) {
    MockConfig c;
    c.seed = gen();
    c.vocab_size = 2 + static_cast<int>(gen() % 4000);
    c.logit_scale = 0.1 + static_cast<double>(gen() % 100) / 10.0;
    MockBackend m(c);
    std::string prompt = "p" + std::to_string(gen()) + " [MASK] q" + std::to_string(gen() % 97);
    AnchorDistribution a = compute_anchor(m, prompt);
    worst = std::max(worst, std::abs(a.q.sum() - 1.0));
    positive = positive && (a.q.array() > 0.0).all();
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d prompts, max |sum-1| = %.3g, strictly positive: %s",
                kAnchorPrompts, worst, positive ? "yes" : "no");
  return {worst <= kAnchorSumTolerance && positive, buf};
}

Outcome llr_units() {
  std::vector<std::string> ids = {"a", "b", "c", "d"};
  SupportSets two = SupportSets::partition({}, ids, {0, 1, 0, 1}, 2);
  bool half_zero = true;
  for (int y = 0; y < 2; ++y) half_zero = half_zero && token_class_score(Vector::Constant(4, 0.5), two, y) == 0.0;
  // The matrix form must agree.
  TokenTable flat({0}, 4);
  flat.gather(0, Vector::Constant(1, 0.5));
  flat.gather(1, Vector::Constant(1, 0.5));
  flat.gather(2, Vector::Constant(1, 0.5));
  flat.gather(3, Vector::Constant(1, 0.5));
  Matrix m = token_class_scores(flat, two);
  half_zero = half_zero && (m.array() == 0.0).all();

  SupportSets one = SupportSets::partition({}, {"a"}, {0}, 1);
  const double s = token_class_score(Vector::Constant(1, 0.9), one, 0);
  const double err = std::abs(s - std::log(9.0));

  bool finite = true;
  for (double q : {0.0, 1.0})
    for (int y = 0; y < 2; ++y) finite = finite && std::isfinite(token_class_score(Vector::Constant(4, q), two, y));
  Vector mixed(4);
  mixed << 0.0, 1.0, 1.0, 0.0;
  finite = finite && std::isfinite(token_class_score(mixed, two, 0));

  char buf[200];
  std::snprintf(buf, sizeof buf, "Q=0.5 exact zero: %s; |S-log 9| = %.3g; finite at Q in {0,1}: %s",
                half_zero ? "yes" : "no", err, finite ? "yes" : "no");
  return {half_zero && err <= kLogNineTolerance && finite, buf};
}

// Minimum over prompts of (smallest indicator probability of the prompt's
// class) / (largest probability of any other token).
double separability(const MockBackend &backend, const scverb::testing::SyntheticTask &task,
                    const fs::path &split, const PromptTemplate &tmpl) {
  std::vector<std::set<TokenId>> indicator(task.num_classes);
  for (int y = 0; y < task.num_classes; ++y)
    for (const auto &w : task.indicators[y])
      for (TokenId t : backend.tokenize(w)) indicator[y].insert(t);
  Dataset data = load_dataset(split, schema_for(tmpl, task.num_classes));
  double worst = std::numeric_limits<double>::infinity();
  for (const auto &s : data.samples) {
    const Vector p = backend.mask_distribution(wrap_template(s, tmpl, backend)).probs;
    const int y = *s.label;
    double lo = 1.0, hi = 0.0;
    for (TokenId t = 0; t < p.size(); ++t)
      (indicator[y].contains(t) ? lo : hi) =
          indicator[y].contains(t) ? std::min(lo, p(t)) : std::max(hi, p(t));
    worst = std::min(worst, lo / hi);
  }
  return worst;
}

RunConfig synthetic_config(const scverb::testing::SyntheticTask &task, const fs::path &out) {
  RunConfig c;
  c.train_path = task.train;
  c.test_path = task.test;
  c.annotations_path = task.annotations;
  c.kb_path = task.kb;
  c.output_dir = out;
  c.template_id = "agnews-1";
  c.n = 100000;
  c.q = 60;
  c.j = 20;
  c.l = 4;
  c.seed = 144;
  return c;
}

Outcome end_to_end(const fs::path &scratch) {
  auto start = Clock::now();
  auto task = scverb::testing::make_synthetic_task(scratch / "clean");
  MockBackend backend(task.mock);
  RunConfig config = synthetic_config(task, scratch / "clean" / "out");
  const PromptTemplate tmpl = config.prompt_template();
  const double ratio = std::min(separability(backend, task, task.train, tmpl),
                                separability(backend, task, task.test, tmpl));
  if (!(ratio >= kSeparabilityRatio)) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "indicator separability %.3g below %.0f; pipeline not run",
                  ratio, kSeparabilityRatio);
    return {false, buf};
  }
  RunOutput clean = run_zero_shot(config, backend);
  const std::size_t test_size = clean.report.details.at("num_samples").get<std::size_t>();

  scverb::testing::SyntheticOptions opt;
  opt.shuffle_labels = true;
  auto shuffled_task = scverb::testing::make_synthetic_task(scratch / "shuffled", opt);
  MockBackend shuffled_backend(shuffled_task.mock);
  RunOutput shuffled =
      run_zero_shot(synthetic_config(shuffled_task, scratch / "shuffled" / "out"), shuffled_backend);
  const double chance = 1.0 / task.num_classes;
  const double t = seconds_since(start);

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "separability %.1fx; micro-F1 %.6g on %zu samples; shuffled %.4f vs chance %.4f; "
                "%.2f s (budget %.0f s)",
                ratio, clean.report.micro_f1, test_size, shuffled.report.micro_f1, chance, t,
                kEndToEndBudgetSeconds);
  return {clean.report.micro_f1 == 1.0 && test_size == 300 &&
              std::abs(shuffled.report.micro_f1 - chance) <= kChanceTolerance &&
              t < kEndToEndBudgetSeconds,
          buf};
}

int run_cli(const std::string &args) {
  std::string cmd = std::string("\"") + SCVERB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const fs::path &scratch) {
  auto task = scverb::testing::make_synthetic_task(scratch);
  write_file(scratch / "mock.json", dump_canonical(scverb::testing::mock_config_json(task.mock)));
  auto args = [&](const std::string &out) {
    return "run --train " + task.train.string() + " --test " + task.test.string() +
           " --annotations " + task.annotations.string() + " --kb " + task.kb.string() +
           " --backend mock-config:" + (scratch / "mock.json").string() +
           " --template agnews-1 --n 100000 --q 60 --j 20 --l 4 --seed 144 --out " +
           (scratch / out).string();
  };
  const int a = run_cli(args("first"));
  const int b = run_cli(args("second"));
  if (a != 0 || b != 0)
    return {false, "exit codes " + std::to_string(a) + ", " + std::to_string(b)};
  const bool same_v = read_file(scratch / "first" / "verbalizer.json") ==
                      read_file(scratch / "second" / "verbalizer.json");
  const bool same_r =
      read_file(scratch / "first" / "report.json") == read_file(scratch / "second" / "report.json");
  return {same_v && same_r, std::string("verbalizer identical: ") + (same_v ? "yes" : "no") +
                                "; report identical: " + (same_r ? "yes" : "no")};
}

Outcome micro_f1_is_accuracy() {
  std::mt19937_64 gen(1000);
  int equal = 0;
  for (int t = 0; t < kMetricTrials; ++t) {
    const int k = 2 + static_cast<int>(gen() % 14);
    const std::size_t n = 1 + gen() % 500;
    std::vector<int> p(n), g(n);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = static_cast<int>(gen() % k);
      p[i] = gen() % 2 == 0 ? g[i] : static_cast<int>(gen() % k);
      hits += p[i] == g[i];
    }
    const double acc = static_cast<double>(hits) / static_cast<double>(n);
    equal += micro_f1(p, g) == acc;
  }
  return {equal == kMetricTrials,
          std::to_string(equal) + "/" + std::to_string(kMetricTrials) + " exactly equal"};
}

Outcome template_goldens() {
  MockBackend m(1, 64);
  int topic = 0, sentiment = 0, topic_ok = 0, sentiment_ok = 0;
  std::string mismatch;
  for (const auto &g : scverb::testing::template_goldens()) {
    const PromptTemplate &tmpl = find_template(g.template_id);
    const bool ok = wrap_template(g.sample, tmpl, m) == g.prompt;
    if (tmpl.task() == TaskKind::kTopic) {
      ++topic;
      topic_ok += ok;
    } else {
      ++sentiment;
      sentiment_ok += ok;
    }
    if (!ok && mismatch.empty()) mismatch = "; first mismatch " + g.template_id;
  }
  const bool stripped = strip_final_punctuation("BIT.") == "BIT";
  return {topic_ok == topic && sentiment_ok == sentiment && topic >= 8 && sentiment >= 8 && stripped,
          "topic " + std::to_string(topic_ok) + "/" + std::to_string(topic) + ", sentiment " +
              std::to_string(sentiment_ok) + "/" + std::to_string(sentiment) +
              ", title stripping " + (stripped ? "ok" : "wrong") + mismatch};
}

}  // namespace

int main() {
  const fs::path scratch = scverb::testing::scratch_dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"anchor normalization", anchor_normalization},
      {"log-likelihood ratio units", llr_units},
      {"end-to-end synthetic classification", [&] { return end_to_end(scratch / "e2e"); }},
      {"determinism of run", [&] { return determinism(scratch / "determinism"); }},
      {"micro-F1 equals accuracy", micro_f1_is_accuracy},
      {"template goldens", template_goldens},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-38s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  fs::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
