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

#ifndef SCVERB_REMOTE_BACKEND_HPP_
#define SCVERB_REMOTE_BACKEND_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "scverb/backend.hpp"

namespace httplib {
class Client;
class Server;
}  // namespace httplib

namespace scverb {

struct RemoteOptions {
  int max_attempts = 3;
  int connect_timeout_ms = 2000;
  int read_timeout_ms = 120000;
};

// Client for the HTTP/JSON backend protocol (see docs/protocol.md):
//   GET  /v1/meta
//   POST /v1/tokenize           {"text", "word_initial"}
//   POST /v1/mask_distribution  {"prompt"}
// Calls are serialized on one connection; the object is safe to share.
class RemoteBackend final : public MlmBackend {
 public:
  // base_url like "http://127.0.0.1:8080".
  explicit RemoteBackend(std::string base_url, RemoteOptions options = {});
  ~RemoteBackend() override;

  BackendMeta meta() const override;
  std::vector<TokenId> tokenize(std::string_view text,
                                bool word_initial = true) const override;
  MaskDistribution mask_distribution(std::string_view prompt) const override;

 private:
  std::string request(const char *method, const std::string &path,
                      const std::string &body) const;

  std::string base_url_;
  RemoteOptions options_;
  mutable std::mutex mu_;
  std::unique_ptr<httplib::Client> client_;
  mutable std::optional<BackendMeta> meta_;
};

// Serves any MlmBackend over the same protocol. Used as the reference
// implementation in tests and by `scverb serve-mock`.
class BackendServer {
 public:
  explicit BackendServer(const MlmBackend &backend);
  ~BackendServer();

  // Binds and starts serving on a background thread. port 0 picks a free
  // port. Returns the bound port.
  int start(const std::string &host = "127.0.0.1", int port = 0);
  // Blocks the calling thread until stop() is called from elsewhere.
  void listen(const std::string &host, int port);
  void stop();

 private:
  const MlmBackend &backend_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace scverb

#endif  // SCVERB_REMOTE_BACKEND_HPP_
