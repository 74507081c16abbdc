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

#ifndef SCVERB_SUPPORT_HPP_
#define SCVERB_SUPPORT_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "scverb/dataset.hpp"

namespace scverb {

// Uniform random permutation of [0, n) from a seeded mt19937_64, using
// rejection sampling so the result is identical on every standard library.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

// Mixes a stage name into a seed so each stochastic step draws its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

struct SupportSample {
  // Positions in the dataset, in draw order. For a fixed seed, a smaller
  // sample is a prefix of a larger one.
  std::vector<std::size_t> indices;
  // Only for labelled draws: by_class[y] lists positions in `indices`.
  std::vector<std::vector<std::size_t>> by_class;
};

// Draws `size` samples without replacement. A labelled draw requires every one
// of `num_classes` classes to appear.
SupportSample sample_support(const std::vector<Sample> &dataset, std::size_t size,
                             std::uint64_t seed, bool labeled, int num_classes = 0);

}  // namespace scverb

#endif  // SCVERB_SUPPORT_HPP_
