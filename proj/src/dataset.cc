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

#include "scverb/dataset.hpp"

#include <algorithm>
#include <set>

#include "scverb/error.hpp"
#include "scverb/io.hpp"
#include "scverb/text.hpp"

namespace scverb {

Dataset parse_dataset(const std::vector<std::string> &lines, const DatasetSchema &schema) {
  const std::set<std::string> declared(schema.fields.begin(), schema.fields.end());
  Dataset out;
  int max_label = -1;
  std::vector<std::size_t> label_lines;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (trim(lines[i]).empty()) continue;
    Json rec = Json::parse(lines[i], nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) throw ParseError(lineno, "not a JSON object");
    Sample s;
    s.id = std::to_string(lineno);
    for (const auto &[key, value] : rec.items()) {
      if (key == "id") {
        s.id = value.is_string() ? value.get<std::string>() : value.dump();
      } else if (key == "label") {
        if (!value.is_number_integer()) throw ParseError(lineno, "label must be an integer");
        int y = value.get<int>();
        if (y < 0) throw ParseError(lineno, "negative label");
        if (schema.num_classes && y >= *schema.num_classes)
          throw ParseError(lineno, "label " + std::to_string(y) + " out of range for " +
                                       std::to_string(*schema.num_classes) + " classes");
        s.label = y;
        max_label = std::max(max_label, y);
      } else if (declared.contains(key)) {
        if (!value.is_string()) throw ParseError(lineno, "field \"" + key + "\" must be a string");
        s.fields[key] = value.get<std::string>();
      } else {
        throw ParseError(lineno, "unknown field \"" + key + "\"");
      }
    }
    for (const auto &f : schema.fields)
      if (!s.fields.contains(f)) throw ParseError(lineno, "missing field \"" + f + "\"");
    out.samples.push_back(std::move(s));
  }
  if (out.samples.empty()) throw ParseError(0, "empty dataset");
  out.num_classes = schema.num_classes.value_or(max_label + 1);
  return out;
}

Dataset load_dataset(const std::filesystem::path &path, const DatasetSchema &schema) {
  try {
    return parse_dataset(read_lines(path), schema);
  } catch (const ParseError &e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

std::vector<int> labels_of(const std::vector<Sample> &samples) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto &s : samples) {
    if (!s.label) throw ArgumentError("sample " + s.id + " has no label");
    labels.push_back(*s.label);
  }
  return labels;
}

}  // namespace scverb
