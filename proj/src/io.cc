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

#include "scverb/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scverb/error.hpp"

namespace scverb {

namespace {

std::string inflate_file(const std::filesystem::path &path) {
  gzFile in = gzopen(path.c_str(), "rb");
  if (in == nullptr) throw ArgumentError("cannot open " + path.string());
  std::string data;
  char buf[1 << 16];
  int got;
  while ((got = gzread(in, buf, sizeof(buf))) > 0) data.append(buf, got);
  bool failed = got < 0;
  gzclose(in);
  if (failed) throw ParseError(0, "corrupt gzip stream in " + path.string());
  return data;
}

void render(const Json &doc, std::string &out, int indent, bool pretty) {
  auto newline = [&](int level) {
    if (!pretty) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(level) * 2, ' ');
  };
  switch (doc.type()) {
    case Json::value_t::object: {
      if (doc.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      // nlohmann::json stores objects in a std::map, so iteration is sorted.
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        newline(indent + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        render(it.value(), out, indent + 1, pretty);
      }
      newline(indent);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (doc.empty()) {
        out += "[]";
        return;
      }
      out.push_back('[');
      for (std::size_t i = 0; i < doc.size(); ++i) {
        if (i) out += pretty ? ", " : ",";
        render(doc[i], out, indent, pretty);
      }
      out.push_back(']');
      return;
    }
    case Json::value_t::number_float:
      out += format_double(doc.get<double>());
      return;
    default:
      out += doc.dump();
  }
}

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::string data = read_file(path);
  std::vector<std::string> lines;
  std::istringstream in(data);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string read_file(const std::filesystem::path &path) {
  if (path.extension() == ".gz") return inflate_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path &path, const std::string &data) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << data;
}

std::string dump_canonical(const Json &doc) {
  std::string out;
  render(doc, out, 0, true);
  out.push_back('\n');
  return out;
}

std::string dump_canonical_line(const Json &doc) {
  std::string out;
  render(doc, out, 0, false);
  return out;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace scverb
