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

#include "scverb/support.hpp"

#include <numeric>
#include <random>

#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb {

namespace {

// Uniform integer in [0, bound] from raw generator output.
std::uint64_t uniform_below_or_equal(std::mt19937_64 &gen, std::uint64_t bound) {
  if (bound == ~std::uint64_t{0}) return gen();
  const std::uint64_t range = bound + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % range;
}

}  // namespace

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  // Forward Fisher-Yates: position i receives a uniform pick from [i, n).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t j = i + uniform_below_or_equal(gen, n - 1 - i);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
  return fnv1a64(stage, 14695981039346656037ull ^ (seed * 0x9E3779B97F4A7C15ull));
}

SupportSample sample_support(const std::vector<Sample> &dataset, std::size_t size,
                             std::uint64_t seed, bool labeled, int num_classes) {
  if (size < 1) throw ArgumentError("support size must be >= 1");
  if (size > dataset.size())
    throw ArgumentError("support size " + std::to_string(size) + " exceeds dataset size " +
                        std::to_string(dataset.size()));
  SupportSample out;
  out.indices = seeded_permutation(dataset.size(), seed);
  out.indices.resize(size);
  if (!labeled) return out;
  if (num_classes < 1) throw ArgumentError("labelled support needs num_classes >= 1");
  out.by_class.resize(num_classes);
  for (std::size_t pos = 0; pos < out.indices.size(); ++pos) {
    const Sample &s = dataset[out.indices[pos]];
    if (!s.label) throw ArgumentError("sample " + s.id + " has no label");
    if (*s.label >= num_classes)
      throw ArgumentError("sample " + s.id + " label out of range");
    out.by_class[*s.label].push_back(pos);
  }
  for (int y = 0; y < num_classes; ++y)
    if (out.by_class[y].empty())
      throw ArgumentError("class " + std::to_string(y) + " is absent from a support set of " +
                          std::to_string(size) + " samples; use a larger q");
  return out;
}

}  // namespace scverb
