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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "scverb/concept_graph.hpp"
#include "scverb/error.hpp"

using namespace scverb;

namespace {

ConceptGraph from_text(const std::string &text) {
  std::istringstream in(text);
  return load_graph(in);
}

std::string random_kb(std::mt19937_64 &gen, int rows) {
  std::string out;
  for (int i = 0; i < rows; ++i) {
    out += "c" + std::to_string(gen() % 15) + "\tinst" + std::to_string(gen() % 6) + "\t" +
           std::to_string(1 + gen() % 9) + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("concept_graph") {

TEST_CASE("empty stream yields an empty graph") {
  CHECK(from_text("").num_instances() == 0);
  CHECK(from_text("\n\n").num_instances() == 0);
}

TEST_CASE("two concepts of one instance") {
  auto g = from_text("company\tapple\t8\nfruit\tapple\t2\n");
  REQUIRE(g.num_instances() == 1);
  CHECK(g.entries("apple").size() == 2);
  CHECK(g.total("apple") == 10);

  auto c = query_concepts(g, "apple", 50);
  REQUIRE(c.size() == 2);
  CHECK(c[0].surface == "company");
  CHECK(c[0].correlation == doctest::Approx(0.8));
  CHECK(c[1].surface == "fruit");
  CHECK(c[1].correlation == doctest::Approx(0.2));
  CHECK(c[0].source_key == "apple");
}

TEST_CASE("malformed records report their line") {
  auto line_of = [](const std::string &text) {
    try {
      from_text(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("company\tapple\t-1") == 1);
  CHECK(line_of("a\tb\t1\ncompany\tapple") == 2);
  CHECK(line_of("a\tb\t1\n\ncompany\tapple\tx") == 3);
  CHECK(line_of("a\tb\t0") == 1);
  CHECK(line_of("a\tb\t1\t2") == 1);
}

TEST_CASE("unknown keys are not an error") {
  auto g = from_text("company\tapple\t8\n");
  CHECK(query_concepts(g, "zzz-unknown").empty());
  CHECK_THROWS_AS(query_concepts(g, "apple", 0), ArgumentError);
}

TEST_CASE("ties break by concept name") {
  auto g = from_text("b\tk\t5\na\tk\t5\n");
  auto c = query_concepts(g, "k", 1);
  REQUIRE(c.size() == 1);
  CHECK(c[0].surface == "a");
  CHECK(c[0].correlation == doctest::Approx(0.5));
}

TEST_CASE("instances are normalized and repeats accumulate") {
  auto g = from_text("company\t  New   York \t2\ncompany\tnew york\t3\ncity\tNEW YORK\t5\n");
  CHECK(g.num_instances() == 1);
  CHECK(g.total("new york") == 10);
  auto c = query_concepts(g, "new york");
  REQUIRE(c.size() == 2);
  CHECK(c[0].surface == "city");
  CHECK(c[1].surface == "company");
}

TEST_CASE("correlations sum to one and rankings are prefix stable") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::string text = random_kb(gen, 60);
    auto g = from_text(text);
    auto again = from_text(text);
    for (const auto &[key, entries] : g.index()) {
      auto full = query_concepts(g, key, 1000);
      double sum = 0.0;
      for (const auto &c : full) {
        CHECK(c.correlation > 0.0);
        CHECK(c.correlation <= 1.0);
        sum += c.correlation;
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
      for (std::size_t j = 1; j <= full.size(); ++j) {
        auto head = query_concepts(g, key, j);
        CHECK(std::equal(head.begin(), head.end(), full.begin()));
      }
      CHECK(query_concepts(again, key, 1000) == full);
    }
  }
}

}
