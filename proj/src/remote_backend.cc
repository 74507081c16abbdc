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

#include "scverb/remote_backend.hpp"

#include "httplib.h"
#include "scverb/error.hpp"
#include "scverb/io.hpp"

namespace scverb {

namespace {

Json parse_body(const std::string &body, const std::string &what) {
  Json doc = Json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw TransportError("malformed JSON in " + what + " response", 1);
  return doc;
}

std::string error_body(const std::string &message) {
  return dump_canonical_line(Json{{"error", message}});
}

}  // namespace

RemoteBackend::RemoteBackend(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)),
      options_(options),
      client_(std::make_unique<httplib::Client>(base_url_)) {
  if (!client_->is_valid())
    throw ConfigError("invalid backend url '" + base_url_ + "'");
  client_->set_connection_timeout(0, options_.connect_timeout_ms * 1000);
  client_->set_read_timeout(options_.read_timeout_ms / 1000,
                            (options_.read_timeout_ms % 1000) * 1000);
  client_->set_keep_alive(true);
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::request(const char *method, const std::string &path,
                                   const std::string &body) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string last_error = "no attempt made";
  int attempt = 0;
  for (attempt = 1; attempt <= std::max(1, options_.max_attempts); ++attempt) {
    httplib::Result res = std::string(method) == "GET"
                              ? client_->Get(path)
                              : client_->Post(path, body, "application/json");
    if (!res) {
      last_error = base_url_ + path + ": " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    std::string message = res->body;
    Json err = Json::parse(res->body, nullptr, false);
    if (!err.is_discarded() && err.is_object() && err.contains("error") &&
        err["error"].is_string())
      message = err["error"].get<std::string>();
    if (res->status >= 400 && res->status < 500)
      throw ArgumentError(path + ": " + message);
    last_error = path + ": HTTP " + std::to_string(res->status) + " " + message;
  }
  throw TransportError(last_error, attempt - 1);
}

BackendMeta RemoteBackend::meta() const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (meta_) return *meta_;
  }
  Json doc = parse_body(request("GET", "/v1/meta", ""), "/v1/meta");
  BackendMeta m;
  try {
    m.vocab_size = doc.at("vocab_size").get<int>();
    m.mask_token = doc.at("mask_token").get<std::string>();
    m.model_id = doc.at("model_id").get<std::string>();
    if (auto it = doc.find("unk_token_id"); it != doc.end() && !it->is_null())
      m.unk_token_id = it->get<int>();
  } catch (const Json::exception &e) {
    throw TransportError(std::string("bad /v1/meta response: ") + e.what(), 1);
  }
  if (m.vocab_size < 2 || m.mask_token.empty())
    throw TransportError("bad /v1/meta response: invalid vocab or mask", 1);
  std::lock_guard<std::mutex> lock(mu_);
  meta_ = m;
  return m;
}

std::vector<TokenId> RemoteBackend::tokenize(std::string_view text,
                                             bool word_initial) const {
  if (text.empty()) throw ArgumentError("cannot tokenize empty text");
  const int vocab = meta().vocab_size;
  Json body = {{"text", std::string(text)}, {"word_initial", word_initial}};
  Json doc = parse_body(request("POST", "/v1/tokenize", body.dump()), "/v1/tokenize");
  std::vector<TokenId> ids;
  try {
    ids = doc.at("ids").get<std::vector<TokenId>>();
  } catch (const Json::exception &e) {
    throw TransportError(std::string("bad /v1/tokenize response: ") + e.what(), 1);
  }
  for (TokenId id : ids)
    if (id < 0 || id >= vocab)
      throw ConfigError("backend returned token id " + std::to_string(id) +
                        " outside vocabulary of " + std::to_string(vocab));
  return ids;
}

MaskDistribution RemoteBackend::mask_distribution(std::string_view prompt) const {
  const BackendMeta m = meta();
  require_single_mask(prompt, m.mask_token);
  Json body = {{"prompt", std::string(prompt)}};
  Json doc = parse_body(request("POST", "/v1/mask_distribution", body.dump()),
                        "/v1/mask_distribution");
  std::vector<double> probs;
  try {
    probs = doc.at("probs").get<std::vector<double>>();
  } catch (const Json::exception &e) {
    throw TransportError(std::string("bad /v1/mask_distribution response: ") + e.what(), 1);
  }
  if (static_cast<int>(probs.size()) != m.vocab_size)
    throw TransportError("distribution has " + std::to_string(probs.size()) +
                             " entries, expected " + std::to_string(m.vocab_size),
                         1);
  MaskDistribution out{Eigen::Map<const Vector>(probs.data(), m.vocab_size),
                       prompt_digest(prompt)};
  if ((out.probs.array() < 0).any() || std::abs(out.probs.sum() - 1.0) > 1e-4)
    throw TransportError("distribution is not a probability vector", 1);
  return out;
}

BackendServer::BackendServer(const MlmBackend &backend)
    : backend_(backend), server_(std::make_unique<httplib::Server>()) {
  auto guard = [](httplib::Response &res, auto &&fn) {
    try {
      fn();
    } catch (const ArgumentError &e) {
      res.status = 400;
      res.set_content(error_body(e.what()), "application/json");
    } catch (const Json::exception &e) {
      res.status = 400;
      res.set_content(error_body(e.what()), "application/json");
    } catch (const std::exception &e) {
      res.status = 500;
      res.set_content(error_body(e.what()), "application/json");
    }
  };
  server_->Get("/v1/meta", [this, guard](const httplib::Request &,
                                         httplib::Response &res) {
    guard(res, [&] {
      BackendMeta m = backend_.meta();
      Json doc = {{"vocab_size", m.vocab_size},
                  {"mask_token", m.mask_token},
                  {"model_id", m.model_id}};
      if (m.unk_token_id) doc["unk_token_id"] = *m.unk_token_id;
      res.set_content(doc.dump(), "application/json");
    });
  });
  server_->Post("/v1/tokenize", [this, guard](const httplib::Request &req,
                                              httplib::Response &res) {
    guard(res, [&] {
      Json in = Json::parse(req.body);
      auto ids = backend_.tokenize(in.at("text").get<std::string>(),
                                   in.value("word_initial", true));
      res.set_content(Json{{"ids", ids}}.dump(), "application/json");
    });
  });
  server_->Post("/v1/mask_distribution", [this, guard](const httplib::Request &req,
                                                       httplib::Response &res) {
    guard(res, [&] {
      Json in = Json::parse(req.body);
      MaskDistribution d = backend_.mask_distribution(in.at("prompt").get<std::string>());
      std::vector<double> probs(d.probs.data(), d.probs.data() + d.probs.size());
      // Full precision so clients see the exact vector.
      Json out = {{"probs", probs}};
      res.set_content(out.dump(), "application/json");
    });
  });
}

BackendServer::~BackendServer() { stop(); }

int BackendServer::start(const std::string &host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host)
                        : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void BackendServer::listen(const std::string &host, int port) {
  if (!server_->listen(host, port))
    throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
}

void BackendServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace scverb
