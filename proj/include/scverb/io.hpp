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

#ifndef SCVERB_IO_HPP_
#define SCVERB_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace scverb {

using Json = nlohmann::json;

// Reads every line of a file, transparently inflating `.gz` paths. Trailing
// '\r' is stripped so CRLF files parse like LF files.
std::vector<std::string> read_lines(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);

void write_file(const std::filesystem::path &path, const std::string &data);

// Deterministic JSON rendering: object keys in sorted order, two-space
// indentation, doubles with 17 significant digits. Two equal documents
// always render to identical bytes.
std::string dump_canonical(const Json &doc);

// Single-line variant of dump_canonical, for JSONL records.
std::string dump_canonical_line(const Json &doc);

// "%.17g" rendering shared by JSON and CSV writers.
std::string format_double(double value);

}  // namespace scverb

#endif  // SCVERB_IO_HPP_
