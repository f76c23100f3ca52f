// Copyright 2026 The radiogen Authors.
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
#include <cstdlib>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "inference/backends.h"

namespace radiogen::inference {
namespace {

prompt::SynthesizedPrompt Prompt(const std::string& id, const std::string& input,
                                 std::optional<std::string> label = std::nullopt) {
  prompt::SynthesizedPrompt p;
  p.template_id = 1;
  p.record_id = id;
  p.rendered_text = "F: " + input;
  p.input = input;
  p.label = std::move(label);
  return p;
}

TEST(SegmenterTest, CharacterMode) {
  EXPECT_EQ(SegmentText("CT平扫：右肺 5mm结节"),
            (TokenSeq{"CT", "平", "扫", "右", "肺", "5mm", "结", "节"}));
  EXPECT_TRUE(SegmentText("，。  ").empty());
}

TEST(SegmenterTest, DictionaryForwardMaximumMatch) {
  const DictionarySegmenter seg({"右肺", "右肺上叶", "结节"});
  EXPECT_EQ(seg.Segment("右肺上叶小结节"), (TokenSeq{"右肺上叶", "小", "结节"}));
  EXPECT_EQ(seg.Segment("右肺CT"), (TokenSeq{"右肺", "CT"}));
}

TEST(QualityTest, FailureOrder) {
  GenerationConfig cfg;
  cfg.request_timeout = Millis(100);
  EXPECT_EQ(QualityCheck("  ", Millis(500), cfg).failure, FailureKind::kNullOutput);
  EXPECT_EQ(QualityCheck(kRepeatText, Millis(500), cfg).failure, FailureKind::kRepetition);
  EXPECT_EQ(QualityCheck("右肺结节", Millis(500), cfg).failure, FailureKind::kTimeout);
  EXPECT_TRUE(QualityCheck("右肺结节", Millis(50), cfg).passed());
}

TEST(QualityTest, ConsecutiveRepeats) {
  EXPECT_TRUE(HasConsecutiveRepeat({"a", "b", "a", "b", "a", "b", "a", "b"}, 3, 4));
  EXPECT_FALSE(HasConsecutiveRepeat({"a", "b", "a", "b", "a", "b", "c"}, 3, 4));
  EXPECT_FALSE(HasConsecutiveRepeat({"a", "b", "c", "a", "b", "c", "a", "b", "c"}, 2, 4));
}

TEST(GenerationConfigTest, Validation) {
  GenerationConfig cfg = GenerationConfigFromJson(Json{{"max_retries", 0}});
  EXPECT_EQ(cfg.max_retries, 0);
  EXPECT_EQ(cfg.top_k, 50);
  EXPECT_THROW(GenerationConfigFromJson(Json{{"top_p", 1.5}}), Error);
  EXPECT_THROW(GenerationConfigFromJson(Json{{"max_retries", -1}}), Error);
  const GenerationConfig back = GenerationConfigFromJson(GenerationConfigToJson(cfg));
  EXPECT_EQ(back.max_retries, 0);
}

TEST(MockTest, RetriesUntilPass) {
  MockScript script;
  script.sequence = {"null", "repeat", "label"};
  MockBackend backend("m", script);
  GenerationConfig cfg;
  const GenerationOutcome out = GenerateChecked(backend, Prompt("a", "右肺", "结节"), cfg);
  EXPECT_TRUE(out.succeeded());
  EXPECT_EQ(out.attempts, 3);
  EXPECT_EQ(out.impression_text, "结节");
  EXPECT_EQ(backend.calls_for("a"), 3);
}

TEST(MockTest, ExhaustedRetriesReportLastFailure) {
  MockScript script;
  script.default_mode = "timeout";
  MockBackend backend("m", script);
  GenerationConfig cfg;
  cfg.max_retries = 2;
  cfg.request_timeout = Millis(10);
  const GenerationOutcome out = GenerateChecked(backend, Prompt("a", "右肺"), cfg);
  EXPECT_FALSE(out.succeeded());
  EXPECT_EQ(out.failure, FailureKind::kTimeout);
  EXPECT_EQ(out.attempts, 3);
  ASSERT_EQ(out.attempt_latency_ms.size(), 3u);
  EXPECT_DOUBLE_EQ(out.attempt_latency_ms[0], 11.0);
}

TEST(MockTest, BackendErrorIsData) {
  MockBackend backend("m", MockScriptFromJson("error", "."));
  GenerationConfig cfg;
  cfg.max_retries = 0;
  const GenerationOutcome out = GenerateChecked(backend, Prompt("a", "右肺"), cfg);
  EXPECT_EQ(out.failure, FailureKind::kBackendError);
  EXPECT_FALSE(out.failure_detail.empty());
}

TEST(MockTest, ParallelRunIsSortedAndComplete) {
  MockBackend backend("m", MockScript{});
  std::vector<prompt::SynthesizedPrompt> prompts;
  for (int i = 9; i >= 0; --i) prompts.push_back(Prompt("r" + std::to_string(i), "肺"));
  const auto outcomes = RunInference(backend, prompts, GenerationConfig{}, 4);
  ASSERT_EQ(outcomes.size(), 10u);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    EXPECT_EQ(outcomes[i].record_id, "r" + std::to_string(i));
  }
  EXPECT_EQ(backend.total_calls(), 10);
  const GenerationOutcome back = OutcomeFromJson(OutcomeToJson(outcomes[3]));
  EXPECT_EQ(back.record_id, "r3");
  EXPECT_EQ(back.impression_text, "肺");
}

TEST(BackendConfigTest, InlineKeyRejected) {
  const Json j = {{"backend_id", "x"}, {"kind", "http"}, {"base_url", "http://h"},
                  {"api_key", "secret"}};
  EXPECT_THROW(BackendConfigFromJson(j, "."), Error);
}

TEST(BackendConfigTest, ShapesAccepted) {
  const Json one = {{"backend_id", "x"}, {"kind", "mock"}, {"script", "echo"}};
  EXPECT_EQ(InferenceConfigFromJson(one, ".").backends.size(), 1u);
  EXPECT_EQ(InferenceConfigFromJson(Json::array({one}), ".").backends.size(), 1u);
  const InferenceConfig cfg = InferenceConfigFromJson(
      Json{{"backends", Json::array({one})}, {"generation", {{"max_retries", 1}}}}, ".");
  EXPECT_EQ(cfg.generation.max_retries, 1);
  EXPECT_THROW(FindBackend(cfg, "y"), Error);
}

class ChatServer {
 public:
  ChatServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      ++hits_;
      const Json body = Json::parse(req.body);
      last_auth_ = req.get_header_value("Authorization");
      last_model_ = body.at("model").get<std::string>();
      const std::string content = body.at("messages").at(0).at("content");
      if (content.find("fail") != std::string::npos) {
        res.status = 500;
        return;
      }
      const Json reply = {{"choices", Json::array({{{"message", {{"content", "印象:" + content}}}}})}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ChatServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  int hits() const { return hits_; }
  std::string last_auth_;
  std::string last_model_;

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

TEST(HttpBackendTest, ChatCompletionRoundTrip) {
  ChatServer server;
  HttpChatBackend backend("h", server.url(), "demo-model", "tok");
  GenerationConfig cfg;
  cfg.request_timeout = Millis(5000);
  const GenerationOutcome out = GenerateChecked(backend, Prompt("a", "右肺结节"), cfg);
  EXPECT_TRUE(out.succeeded());
  EXPECT_EQ(out.impression_text, "印象:F: 右肺结节");
  EXPECT_EQ(server.last_auth_, "Bearer tok");
  EXPECT_EQ(server.last_model_, "demo-model");
}

TEST(HttpBackendTest, ServerErrorRetriedThenReported) {
  ChatServer server;
  HttpChatBackend backend("h", server.url(), "demo-model", "");
  GenerationConfig cfg;
  cfg.max_retries = 2;
  cfg.request_timeout = Millis(5000);
  const GenerationOutcome out = GenerateChecked(backend, Prompt("a", "fail"), cfg);
  EXPECT_EQ(out.failure, FailureKind::kBackendError);
  EXPECT_EQ(server.hits(), 3);
}

TEST(HttpBackendTest, UnreachableHostIsBackendError) {
  std::uint16_t port = 0;
  {
    httplib::Server probe;
    port = static_cast<std::uint16_t>(probe.bind_to_any_port("127.0.0.1"));
  }
  HttpChatBackend backend("h", "http://127.0.0.1:" + std::to_string(port), "m", "");
  GenerationConfig cfg;
  cfg.request_timeout = Millis(2000);
  EXPECT_THROW(backend.Generate(Prompt("a", "x"), cfg), BackendError);
}

TEST(HttpBackendTest, BadUrlRejected) {
  EXPECT_THROW(HttpChatBackend("h", "ftp://x", "m", ""), Error);
  EXPECT_THROW(HttpChatBackend("h", "localhost", "m", ""), Error);
}

}  // namespace
}  // namespace radiogen::inference
