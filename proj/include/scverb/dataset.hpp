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

#ifndef SCVERB_DATASET_HPP_
#define SCVERB_DATASET_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scverb {

struct Sample {
  std::string id;
  std::map<std::string, std::string> fields;
  std::optional<int> label;
};

// Text fields a record must carry, and optionally the class count.
struct DatasetSchema {
  std::vector<std::string> fields = {"text"};
  std::optional<int> num_classes;
};

struct Dataset {
  std::vector<Sample> samples;
  int num_classes = 0;

  std::size_t size() const { return samples.size(); }
};

// JSON lines: {"id": str (optional), "label": int (optional), <field>: str...}.
// Fields outside the schema are rejected. Without schema.num_classes the class
// count is one more than the largest label. A missing id becomes the 1-based
// line number.
Dataset load_dataset(const std::filesystem::path &path, const DatasetSchema &schema);
Dataset parse_dataset(const std::vector<std::string> &lines, const DatasetSchema &schema);

std::vector<int> labels_of(const std::vector<Sample> &samples);

}  // namespace scverb

#endif  // SCVERB_DATASET_HPP_
