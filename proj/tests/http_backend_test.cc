// Copyright 2026 The seprand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seprand/http_backend.hpp"

#include <atomic>
#include <thread>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <httplib.h>

#include "seprand/error.hpp"
#include "seprand/evaluator.hpp"
#include "seprand/ingest.hpp"
#include "test_support.hpp"

namespace seprand {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

/// In-process server speaking the wire protocol on top of MockBackend.
class FakeSidecar {
 public:
  FakeSidecar() {
    server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
      if (!admit(req, res)) return;
      const auto body = Json::parse(req.body);
      const auto conts = body.at("continuations").get<std::vector<std::string>>();
      const auto r = mock_.score(body.at("prompt").get<std::string>(), conts);
      Json out{{"logprobs", r.logprobs}, {"tokens_evaluated", r.tokens_evaluated}};
      if (override_body) out = *override_body;
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/v1/generate", [this](const httplib::Request& req, httplib::Response& res) {
      if (!admit(req, res)) return;
      last_generate = Json::parse(req.body);
      GenParams p;
      p.max_tokens = last_generate.at("max_tokens").get<std::uint32_t>();
      p.temperature = last_generate.at("temperature").get<double>();
      p.stop = last_generate.at("stop").get<std::vector<std::string>>();
      if (last_generate.contains("seed")) p.seed = last_generate["seed"].get<std::uint64_t>();
      const auto r = mock_.generate(last_generate.at("prompt").get<std::string>(), p);
      res.set_content(Json{{"text", r.text}, {"finish_reason", r.finish_reason}}.dump(),
                      "application/json");
    });
    server_.Get("/v1/vocab", [this](const httplib::Request& req, httplib::Response& res) {
      if (!admit(req, res)) return;
      const auto v = mock_.vocabulary();
      res.set_content(Json{{"tokens", v.tokens},
                           {"special_indices", std::vector<std::size_t>(
                                                   v.special.begin(), v.special.end())}}
                          .dump(),
                      "application/json");
    });
    server_.Get("/v1/health", [this](const httplib::Request& req, httplib::Response& res) {
      if (!admit(req, res)) return;
      res.set_content(R"({"model":"fake-124m","status":"ok"})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  HttpBackendOptions options() {
    HttpBackendOptions o;
    o.endpoint = url();
    o.request_timeout = std::chrono::milliseconds(5000);
    o.sleep = [this](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
    return o;
  }

  /// Next `n` requests fail with `status`.
  std::atomic<int> failures_left{0};
  std::atomic<int> failure_status{503};
  std::atomic<int> requests{0};
  std::string last_authorization;
  Json last_generate;
  std::optional<Json> override_body;
  std::vector<long> sleeps;

 private:
  bool admit(const httplib::Request& req, httplib::Response& res) {
    ++requests;
    last_authorization = req.get_header_value("Authorization");
    if (failures_left > 0) {
      --failures_left;
      res.status = failure_status;
      res.set_content("busy", "text/plain");
      return false;
    }
    return true;
  }

  MockBackend mock_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(WireFormatTest, RequestBodies) {
  const std::vector<std::string> conts = {" positive", " negative"};
  EXPECT_EQ(dump_line(score_request_json("p", conts)),
            R"({"continuations":[" positive"," negative"],"prompt":"p"})");
  GenParams p{.max_tokens = 8, .temperature = 1.0, .stop = {"\n"}, .seed = 3};
  EXPECT_EQ(dump_line(generate_request_json("q", p)),
            R"({"max_tokens":8,"prompt":"q","seed":3,"stop":["\n"],"temperature":1.0})");
  p.seed.reset();
  EXPECT_FALSE(generate_request_json("q", p).contains("seed"));
}

TEST(WireFormatTest, ResponseParsing) {
  const auto s = parse_score_response(
      Json::parse(R"({"logprobs":[-1.5,-2],"tokens_evaluated":[1,2]})"));
  EXPECT_THAT(s.logprobs, ElementsAre(-1.5, -2.0));
  EXPECT_THAT(s.tokens_evaluated, ElementsAre(1, 2));
  const auto g = parse_generate_response(
      Json::parse(R"({"text":"hi","finish_reason":"stop"})"));
  EXPECT_EQ(g.text, "hi");
  const auto v = parse_vocab_response(
      Json::parse(R"({"tokens":["<eos>","Ġthe"],"special_indices":[0]})"));
  EXPECT_EQ(v.tokens[1], "\xC4\xA0the");
  EXPECT_EQ(v.special, (std::set<std::size_t>{0}));
}

TEST(WireFormatTest, MalformedResponsesNameTheField) {
  auto message_of = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol);
      return e.what();
    }
    return "no error";
  };
  EXPECT_THAT(message_of([] { parse_score_response(Json::parse(R"({"logprobs":[]})")); }),
              HasSubstr("tokens_evaluated"));
  EXPECT_THAT(message_of([] {
                parse_score_response(
                    Json::parse(R"({"logprobs":["x"],"tokens_evaluated":[1]})"));
              }),
              HasSubstr("logprobs[0]"));
  EXPECT_THAT(message_of([] {
                parse_generate_response(Json::parse(R"({"text":"a","finish_reason":"eos"})"));
              }),
              HasSubstr("finish_reason"));
  EXPECT_THAT(message_of([] {
                parse_vocab_response(Json::parse(R"({"tokens":["a"],"special_indices":[4]})"));
              }),
              HasSubstr("special_indices[0]"));
}

TEST(HttpBackendTest, ServesTheMockOverTheWire) {
  FakeSidecar sidecar;
  HttpBackend http(sidecar.options());
  MockBackend mock;
  const std::vector<std::string> conts = {" positive", " negative", " x y"};
  const auto remote = score_checked(http, "review Answer:", conts);
  const auto local = mock.score("review Answer:", conts);
  EXPECT_EQ(remote.logprobs, local.logprobs);
  EXPECT_EQ(remote.tokens_evaluated, local.tokens_evaluated);

  GenParams p{.max_tokens = 5, .temperature = 1.0, .stop = {"\n"}, .seed = 9};
  EXPECT_EQ(generate_text(http, "q", p), generate_text(mock, "q", p));
  EXPECT_EQ(sidecar.last_generate.at("seed"), 9);

  EXPECT_EQ(load_vocabulary(http), mock.vocabulary());
}

TEST(HttpBackendTest, ModelNameFromHealth) {
  FakeSidecar sidecar;
  HttpBackend http(sidecar.options());
  EXPECT_EQ(http.model_name(), "fake-124m");
  const int after_first = sidecar.requests;
  EXPECT_EQ(http.model_name(), "fake-124m");
  EXPECT_EQ(sidecar.requests, after_first);

  auto named = sidecar.options();
  named.model_name = "configured";
  EXPECT_EQ(HttpBackend(named).model_name(), "configured");
}

TEST(HttpBackendTest, BearerTokenForwarded) {
  FakeSidecar sidecar;
  auto o = sidecar.options();
  o.api_token = "s3cret";
  HttpBackend http(o);
  http.health();
  EXPECT_EQ(sidecar.last_authorization, "Bearer s3cret");
  HttpBackend anonymous(sidecar.options());
  anonymous.health();
  EXPECT_EQ(sidecar.last_authorization, "");
}

TEST(HttpBackendTest, TransientFailuresRetriedWithBackoff) {
  FakeSidecar sidecar;
  HttpBackend http(sidecar.options());
  sidecar.failures_left = 2;
  const std::vector<std::string> conts = {" a"};
  EXPECT_NO_THROW(http.score("p", conts));
  EXPECT_EQ(sidecar.requests, 3);
  EXPECT_THAT(sidecar.sleeps, ElementsAre(250, 500));
}

TEST(HttpBackendTest, ExhaustedRetriesAreBackendUnavailable) {
  FakeSidecar sidecar;
  HttpBackend http(sidecar.options());
  sidecar.failures_left = 10;
  sidecar.failure_status = 429;
  const std::vector<std::string> conts = {" a"};
  try {
    http.score("p", conts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
    EXPECT_THAT(e.what(), HasSubstr("3 attempts"));
  }
  EXPECT_EQ(sidecar.requests, 3);
  EXPECT_THAT(sidecar.sleeps, ElementsAre(250, 500));
}

TEST(HttpBackendTest, ClientErrorsAreNotRetried) {
  FakeSidecar sidecar;
  HttpBackend http(sidecar.options());
  sidecar.failures_left = 1;
  sidecar.failure_status = 400;
  const std::vector<std::string> conts = {" a"};
  try {
    http.score("p", conts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
  EXPECT_EQ(sidecar.requests, 1);
  EXPECT_TRUE(sidecar.sleeps.empty());
}

TEST(HttpBackendTest, LengthMismatchIsProtocolError) {
  FakeSidecar sidecar;
  sidecar.override_body = Json{{"logprobs", {-1.0}}, {"tokens_evaluated", {1}}};
  HttpBackend http(sidecar.options());
  const std::vector<std::string> conts = {" a", " b"};
  try {
    http.score("p", conts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    EXPECT_THAT(e.what(), HasSubstr("logprobs"));
  }
}

TEST(HttpBackendTest, UnreachableHostIsBackendUnavailable) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpBackendOptions o;
  o.endpoint = "http://127.0.0.1:" + std::to_string(port);
  o.request_timeout = std::chrono::milliseconds(500);
  std::vector<long> sleeps;
  o.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
  HttpBackend http(o);
  try {
    http.health();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(sleeps.size(), 2u);
}

TEST(HttpBackendTest, EndpointMustBeUrl) {
  HttpBackendOptions o;
  o.endpoint = "localhost:8000";
  EXPECT_THROW(HttpBackend{o}, Error);
}

TEST(HttpBackendTest, PathPrefixIsKept) {
  FakeSidecar sidecar;
  auto o = sidecar.options();
  o.endpoint = sidecar.url() + "/";
  EXPECT_EQ(HttpBackend(o).health(), "fake-124m");
}

TEST(HttpBackendTest, ScoreSeparatorThroughMakeBackend) {
  FakeSidecar sidecar;
  BackendSpec spec;
  spec.endpoint = sidecar.url();
  spec.model_name = "";
  spec.max_concurrency = 2;
  auto http = make_backend(spec);
  MockBackend mock;
  const auto task = testing::sentiment_task(12, 0);
  const auto ctx = make_context_block(task, {task.train[0]});
  const auto sep = fixed_separator("Answer:");
  EXPECT_EQ(score_separator(*http, task, sep, Split::kTrain, ctx),
            score_separator(mock, task, sep, Split::kTrain, ctx));
  EXPECT_EQ(http->model_name(), "fake-124m");
}

}  // namespace
}  // namespace seprand
