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

#ifndef SCVERB_METRICS_HPP_
#define SCVERB_METRICS_HPP_

#include <span>
#include <vector>

namespace scverb {

// Micro-averaged F1 over all decisions. For single-label multiclass data
// every wrong prediction is one false positive and one false negative, so
// this equals accuracy.
double micro_f1(std::span<const int> predictions, std::span<const int> golds);

double accuracy(std::span<const int> predictions, std::span<const int> golds);

struct ClassCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
};

std::vector<ClassCounts> per_class_counts(std::span<const int> predictions,
                                          std::span<const int> golds, int num_classes);

}  // namespace scverb

#endif  // SCVERB_METRICS_HPP_
