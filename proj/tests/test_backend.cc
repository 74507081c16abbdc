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

#include <atomic>
#include <cmath>
#include <random>

#include "doctest.h"
#include "scverb/error.hpp"
#include "scverb/io.hpp"
#include "scverb/mock_backend.hpp"
#include "scverb/remote_backend.hpp"
#include "scverb/text.hpp"
#include "test_backends.hpp"
// After Eigen: httplib pulls in <resolv.h>, whose _res macro clashes with it.
#include "httplib.h"

using namespace scverb;

namespace {

Json fixture(const std::string &name) {
  return Json::parse(read_file(std::filesystem::path(SCVERB_FIXTURE_DIR) / "protocol" / name));
}

std::string random_prompt(std::mt19937_64 &gen, const std::string &mask) {
  std::string p;
  int words = 1 + static_cast<int>(gen() % 12);
  int at = static_cast<int>(gen() % (words + 1));
  for (int i = 0; i <= words; ++i) {
    if (i == at) p += mask + " ";
    if (i < words) p += "w" + std::to_string(gen() % 1000) + " ";
  }
  return p;
}

// Serves the golden fixtures and records what the client sent.
struct FixtureServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::string meta_file = "meta.response.json";
  Json last_tokenize, last_mask;

  FixtureServer() {
    server.Get("/v1/meta", [this](const httplib::Request &, httplib::Response &res) {
      res.set_content(fixture(meta_file).dump(), "application/json");
    });
    server.Post("/v1/tokenize", [this](const httplib::Request &req, httplib::Response &res) {
      last_tokenize = Json::parse(req.body);
      res.set_content(fixture("tokenize.response.json").dump(), "application/json");
    });
    server.Post("/v1/mask_distribution",
                [this](const httplib::Request &req, httplib::Response &res) {
                  last_mask = Json::parse(req.body);
                  if (last_mask.at("prompt") == fixture("mask_distribution.request.json").at("prompt")) {
                    res.set_content(fixture("mask_distribution.response.json").dump(),
                                    "application/json");
                  } else {
                    res.status = 400;
                    res.set_content(fixture("error.response.json").dump(), "application/json");
                  }
                });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FixtureServer() {
    server.stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_SUITE("backend") {

TEST_CASE("mock meta echoes its construction") {
  MockBackend m(7, 64);
  BackendMeta meta = m.meta();
  CHECK(meta.vocab_size == 64);
  CHECK(meta.mask_token == "[MASK]");
  CHECK(meta.model_id == "mock-7");
  CHECK(m.meta().model_id == meta.model_id);
  CHECK_THROWS_AS(MockBackend(1, 1), ArgumentError);
}

TEST_CASE("mock tokenize") {
  MockBackend m(7, 64);
  auto ids = m.tokenize("a b");
  CHECK(ids.size() == 2);
  CHECK(m.tokenize("a b") == ids);
  CHECK_THROWS_AS(m.tokenize(""), ArgumentError);
  CHECK_THROWS_AS(m.tokenize("   "), ArgumentError);
  for (TokenId t : m.tokenize("one two three four five")) {
    CHECK(t >= 0);
    CHECK(t < 64);
  }
  for (std::string s : {"  Apple  Pie", "NEW york", "x"})
    CHECK(m.tokenize(s) == m.tokenize(normalize_key(s)));
}

TEST_CASE("mock distribution is a deterministic softmax") {
  MockBackend m(7, 64);
  const std::string prompt = "A [MASK] news : hello";
  auto a = m.mask_distribution(prompt);
  auto b = m.mask_distribution(prompt);
  CHECK(std::abs(a.probs.sum() - 1.0) < 1e-9);
  CHECK((a.probs.array() == b.probs.array()).all());
  CHECK(a.prompt_digest == prompt_digest(prompt));
  Vector expect = softmax(m.logits(prompt));
  CHECK((a.probs.array() == expect.array()).all());

  CHECK_THROWS_AS(m.mask_distribution("no mask here"), ArgumentError);
  CHECK_THROWS_AS(m.mask_distribution("[MASK] and [MASK]"), ArgumentError);

  MockBackend other(8, 64);
  CHECK((other.mask_distribution(prompt).probs.array() != a.probs.array()).any());
}

TEST_CASE("mock boosts raise the boosted tokens") {
  MockConfig c;
  c.seed = 3;
  c.vocab_size = 128;
  c.boosts.push_back({"cue", {"target"}, 5.0});
  MockBackend m(c);
  TokenId t = m.tokenize("target").front();
  Vector with = m.logits("cue [MASK]");
  Vector plain = MockBackend(MockConfig{3, 128, "[MASK]", 1.0, {}}).logits("cue [MASK]");
  CHECK(with(t) == doctest::Approx(plain(t) + 5.0));

  Json doc = {{"seed", 3}, {"vocab_size", 128},
              {"boosts", {{{"trigger", "cue"}, {"words", {"target"}}, {"logit", 5.0}}}}};
  MockBackend parsed(mock_config_from_json(doc));
  CHECK((parsed.logits("cue [MASK]").array() == with.array()).all());
}

TEST_CASE("every distribution is a probability vector") {
  MockBackend mock(99, 200);
  BackendServer server(mock);
  int port = server.start();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port));
  std::mt19937_64 gen(1);
  for (int i = 0; i < 120; ++i) {
    std::string prompt = random_prompt(gen, "[MASK]");
    for (const MlmBackend *b : {static_cast<const MlmBackend *>(&mock),
                                static_cast<const MlmBackend *>(&remote)}) {
      auto d = b->mask_distribution(prompt);
      CHECK(d.probs.size() == 200);
      CHECK((d.probs.array() >= 0).all());
      CHECK(std::abs(d.probs.sum() - 1.0) < 1e-4);
    }
  }
  server.stop();
}

TEST_CASE("remote client mirrors the in-process backend") {
  MockConfig c;
  c.seed = 5;
  c.vocab_size = 50;
  c.mask_token = "<mask>";
  MockBackend mock(c);
  BackendServer server(mock);
  int port = server.start();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port));

  CHECK(remote.meta().vocab_size == 50);
  CHECK(remote.meta().mask_token == "<mask>");
  CHECK(remote.meta().model_id == "mock-5");
  CHECK(remote.tokenize("new york city") == mock.tokenize("new york city"));
  auto a = remote.mask_distribution("It was <mask> . fine");
  auto b = mock.mask_distribution("It was <mask> . fine");
  CHECK((a.probs.array() == b.probs.array()).all());
  CHECK(a.prompt_digest == b.prompt_digest);

  // Client side validation happens before any request.
  CHECK_THROWS_AS(remote.mask_distribution("no mask"), ArgumentError);
  CHECK_THROWS_AS(remote.tokenize(""), ArgumentError);
  // The server rejects what the client lets through.
  CHECK_THROWS_AS(remote.tokenize("   "), ArgumentError);
  server.stop();
}

TEST_CASE("remote client against golden fixtures") {
  FixtureServer fx;
  RemoteBackend remote(fx.url());
  BackendMeta meta = remote.meta();
  CHECK(meta.vocab_size == 4);
  CHECK(meta.mask_token == "<mask>");
  CHECK(meta.model_id == "fixture-model");
  CHECK(!meta.unk_token_id);

  CHECK(remote.tokenize("company") == std::vector<TokenId>{2});
  CHECK(fx.last_tokenize == fixture("tokenize.request.json"));

  std::string prompt = fixture("mask_distribution.request.json").at("prompt");
  auto d = remote.mask_distribution(prompt);
  CHECK(fx.last_mask == fixture("mask_distribution.request.json"));
  std::vector<double> want = fixture("mask_distribution.response.json").at("probs");
  REQUIRE(d.probs.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(d.probs(i) == want[static_cast<std::size_t>(i)]);

  try {
    remote.mask_distribution("A <mask> other prompt");
    FAIL("expected a 400");
  } catch (const ArgumentError &e) {
    CHECK(std::string(e.what()).find("exactly one mask token") != std::string::npos);
  }

  fx.meta_file = "meta_unk.response.json";
  RemoteBackend with_unk(fx.url());
  CHECK(with_unk.meta().unk_token_id == 3);
}

TEST_CASE("bad responses are rejected") {
  httplib::Server server;
  std::string probs = R"({"probs":[0.5,0.6,0.1,0.1]})";
  std::string ids = R"({"ids":[9]})";
  server.Get("/v1/meta", [](const httplib::Request &, httplib::Response &res) {
    res.set_content(fixture("meta.response.json").dump(), "application/json");
  });
  server.Post("/v1/tokenize", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content(ids, "application/json");
  });
  server.Post("/v1/mask_distribution", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content(probs, "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port));
  CHECK_THROWS_AS(remote.tokenize("x"), ConfigError);
  CHECK_THROWS_AS(remote.mask_distribution("<mask>"), TransportError);
  probs = R"({"probs":[0.5,0.5]})";
  CHECK_THROWS_AS(remote.mask_distribution("<mask>"), TransportError);
  probs = R"({"probs":[1.5,-0.5,0.0,0.0]})";
  CHECK_THROWS_AS(remote.mask_distribution("<mask>"), TransportError);
  probs = "garbage";
  CHECK_THROWS_AS(remote.mask_distribution("<mask>"), TransportError);
  server.stop();
  t.join();
}

TEST_CASE("server errors are retried, then reported with the attempt count") {
  httplib::Server server;
  std::atomic<int> calls{0};
  std::atomic<int> fail_first{2};
  server.Get("/v1/meta", [&](const httplib::Request &, httplib::Response &res) {
    if (calls++ < fail_first) {
      res.status = 503;
      res.set_content(R"({"error":"loading"})", "application/json");
      return;
    }
    res.set_content(fixture("meta.response.json").dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string url = "http://127.0.0.1:" + std::to_string(port);

  CHECK(RemoteBackend(url).meta().vocab_size == 4);
  CHECK(calls == 3);

  calls = 0;
  fail_first = 100;
  try {
    RemoteBackend(url, {.max_attempts = 3}).meta();
    FAIL("expected a transport error");
  } catch (const TransportError &e) {
    CHECK(e.attempts() == 3);
    CHECK(std::string(e.what()).find("503") != std::string::npos);
  }
  CHECK(calls == 3);
  server.stop();
  t.join();
}

TEST_CASE("unreachable server is a transport error") {
  int port = scverb::testing::closed_port();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port),
                       {.max_attempts = 2, .connect_timeout_ms = 200, .read_timeout_ms = 500});
  try {
    remote.meta();
    FAIL("expected a transport error");
  } catch (const TransportError &e) {
    CHECK(e.attempts() == 2);
  }
  CHECK_THROWS_AS(remote.mask_distribution("[MASK]"), TransportError);
}

TEST_CASE("remote backend is safe under concurrent calls") {
  MockBackend mock(21, 64);
  BackendServer server(mock);
  int port = server.start();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port));
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (int i = 0; i < 10; ++i) {
        std::string p = "t" + std::to_string(w) + " [MASK] " + std::to_string(i);
        if ((remote.mask_distribution(p).probs.array() != mock.mask_distribution(p).probs.array()).any())
          ++mismatches;
      }
    });
  }
  for (auto &t : threads) t.join();
  CHECK(mismatches == 0);
  server.stop();
}

}
