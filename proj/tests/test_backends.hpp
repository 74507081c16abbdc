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

#ifndef SCVERB_TESTS_TEST_BACKENDS_HPP_
#define SCVERB_TESTS_TEST_BACKENDS_HPP_

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <optional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scverb/backend.hpp"
#include "scverb/error.hpp"
#include "scverb/text.hpp"

namespace scverb::testing {

// Backend answering from explicit tables. Prompts without an entry get the
// uniform distribution; surfaces without an entry are an error.
class TableBackend final : public MlmBackend {
 public:
  explicit TableBackend(int vocab_size, std::string mask = "[MASK]")
      : vocab_(vocab_size), mask_(std::move(mask)) {}

  void set_distribution(const std::string &prompt, Vector probs) {
    dists_[prompt] = std::move(probs);
  }
  void set_tokens(const std::string &surface, std::vector<TokenId> ids) {
    tokens_[normalize_key(surface)] = std::move(ids);
  }
  void set_unk(TokenId id) { unk_ = id; }

  BackendMeta meta() const override { return {vocab_, mask_, "table", unk_}; }

  std::vector<TokenId> tokenize(std::string_view text, bool = true) const override {
    if (trim(text).empty()) throw ArgumentError("empty text");
    auto it = tokens_.find(normalize_key(text));
    if (it == tokens_.end()) throw ArgumentError("no tokens for '" + std::string(text) + "'");
    return it->second;
  }

  MaskDistribution mask_distribution(std::string_view prompt) const override {
    require_single_mask(prompt, mask_);
    auto it = dists_.find(std::string(prompt));
    Vector p = it == dists_.end() ? Vector::Constant(vocab_, 1.0 / vocab_) : it->second;
    return {p, prompt_digest(prompt)};
  }

 private:
  int vocab_;
  std::string mask_;
  std::optional<TokenId> unk_;
  std::map<std::string, Vector> dists_;
  std::map<std::string, std::vector<TokenId>> tokens_;
};

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("scverb-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A loopback port nothing listens on: bound, read back, then closed.
inline int closed_port() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t len = sizeof(addr);
  ::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr));
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace scverb::testing

#endif  // SCVERB_TESTS_TEST_BACKENDS_HPP_
