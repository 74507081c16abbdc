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

#include "scverb/metrics.hpp"

#include <string>

#include "scverb/error.hpp"

namespace scverb {

namespace {

void check_lengths(std::span<const int> predictions, std::span<const int> golds) {
  if (predictions.size() != golds.size())
    throw ArgumentError("predictions (" + std::to_string(predictions.size()) +
                        ") and golds (" + std::to_string(golds.size()) + ") differ in length");
  if (predictions.empty()) throw ArgumentError("no predictions to score");
}

}  // namespace

double micro_f1(std::span<const int> predictions, std::span<const int> golds) {
  check_lengths(predictions, golds);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == golds[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  if (tp == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
}

double accuracy(std::span<const int> predictions, std::span<const int> golds) {
  check_lengths(predictions, golds);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) correct += predictions[i] == golds[i];
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

std::vector<ClassCounts> per_class_counts(std::span<const int> predictions,
                                          std::span<const int> golds, int num_classes) {
  check_lengths(predictions, golds);
  std::vector<ClassCounts> counts(num_classes);
  auto in_range = [&](int y) { return y >= 0 && y < num_classes; };
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (in_range(golds[i])) ++counts[golds[i]].gold;
    if (in_range(predictions[i])) ++counts[predictions[i]].predicted;
    if (predictions[i] == golds[i] && in_range(golds[i])) ++counts[golds[i]].correct;
  }
  return counts;
}

}  // namespace scverb
