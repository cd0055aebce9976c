// Copyright 2026 The toolrobust Authors.
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


#include "toolrobust/chat_client.h"

#include <cstdlib>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/mock_chat_server.h"

namespace toolrobust {
namespace {

using ::testing::HasSubstr;
using ::toolrobust::testing::Completion;
using ::toolrobust::testing::MockChatServer;
using ::toolrobust::testing::MockReply;

EndpointConfig ConfigFor(const MockChatServer& server) {
  EndpointConfig c;
  c.base_url = server.base_url();
  c.model = "test-model";
  c.backoff_initial_seconds = 0.0;
  c.max_retries = 3;
  return c;
}

ChatRequest UserMessage(const std::string& text) {
  ChatRequest r;
  r.messages.push_back({"user", text, std::nullopt, std::nullopt});
  return r;
}

TEST(ChatClientTest, RequestBodyShape) {
  MockChatServer server([](const Json&, int) { return Completion("hello"); });
  EndpointConfig config = ConfigFor(server);
  config.temperature = 0.0;
  config.max_tokens = 64;
  ChatClient client(config);
  ChatRequest req = UserMessage("hi");
  req.tools = Json::array({{{"type", "function"}}});
  absl::StatusOr<ChatResponse> r = client.Send(req);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->content, "hello");
  EXPECT_TRUE(r->tool_calls.empty());
  Json body = server.requests().at(0);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["chat_template_kwargs"]["enable_thinking"], false);
  EXPECT_EQ(body["messages"][0]["content"], "hi");
  EXPECT_EQ(body["tools"].size(), 1u);
}

TEST(ChatClientTest, NativeToolCalls) {
  Json calls = Json::array({{{"id", "call_1"},
                             {"type", "function"},
                             {"function",
                              {{"name", "QueryBalance"},
                               {"arguments", "{\"token\":\"t\"}"}}}}});
  MockChatServer server([&](const Json&, int) { return Completion("", calls); });
  ChatClient client(ConfigFor(server));
  absl::StatusOr<ChatResponse> r = client.Send(UserMessage("x"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->tool_calls, calls);
}

TEST(ChatClientTest, RetriesServerErrors) {
  MockChatServer server([](const Json&, int index) {
    if (index < 2) return MockReply{index == 0 ? 500 : 429, "busy"};
    return Completion("ok");
  });
  ChatClient client(ConfigFor(server));
  absl::StatusOr<ChatResponse> r = client.Send(UserMessage("x"));
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(server.request_count(), 3);
  EXPECT_EQ(client.request_count(), 3);
}

TEST(ChatClientTest, GivesUpAfterMaxRetries) {
  MockChatServer server([](const Json&, int) { return MockReply{503, "down"}; });
  EndpointConfig config = ConfigFor(server);
  config.max_retries = 2;
  ChatClient client(config);
  absl::StatusOr<ChatResponse> r = client.Send(UserMessage("x"));
  EXPECT_EQ(r.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_THAT(r.status().message(), HasSubstr("3 attempts"));
  EXPECT_EQ(server.request_count(), 3);
}

TEST(ChatClientTest, ClientErrorsAreNotRetried) {
  MockChatServer server([](const Json&, int) { return MockReply{400, "bad"}; });
  ChatClient client(ConfigFor(server));
  EXPECT_FALSE(client.Send(UserMessage("x")).ok());
  EXPECT_EQ(server.request_count(), 1);
}

TEST(ChatClientTest, MalformedBodyIsUnavailable) {
  MockChatServer server([](const Json&, int) { return MockReply{200, "nope"}; });
  ChatClient client(ConfigFor(server));
  EXPECT_EQ(client.Send(UserMessage("x")).status().code(),
            absl::StatusCode::kUnavailable);
}

TEST(ChatClientTest, UnreachableEndpoint) {
  EndpointConfig config;
  config.base_url = "http://127.0.0.1:1/v1";
  config.max_retries = 1;
  config.backoff_initial_seconds = 0.0;
  config.request_timeout_seconds = 2.0;
  ChatClient client(config);
  EXPECT_EQ(client.Send(UserMessage("x")).status().code(),
            absl::StatusCode::kUnavailable);
  EXPECT_EQ(client.request_count(), 2);
}

TEST(ChatClientTest, ParseResponse) {
  EXPECT_FALSE(ParseChatResponse("{}").ok());
  absl::StatusOr<ChatResponse> r = ParseChatResponse(
      R"({"choices":[{"message":{"role":"assistant","content":null}}]})");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->content, "");
}

TEST(ChatClientTest, Validation) {
  EndpointConfig c;
  EXPECT_FALSE(ValidateEndpointConfig(c).ok());
  c.base_url = "http://x/v1";
  EXPECT_TRUE(ValidateEndpointConfig(c).ok());
  c.concurrency_limit = 0;
  EXPECT_FALSE(ValidateEndpointConfig(c).ok());
}

TEST(ChatClientTest, EnvironmentFallback) {
  unsetenv(kEndpointEnvVar);
  unsetenv(kApiKeyEnvVar);
  EndpointConfig c;
  absl::Status s = ApplyEndpointEnvironment(&c);
  EXPECT_THAT(s.message(), HasSubstr(kEndpointEnvVar));
  setenv(kEndpointEnvVar, "http://env:9/v1", 1);
  setenv(kApiKeyEnvVar, "secret", 1);
  ASSERT_TRUE(ApplyEndpointEnvironment(&c).ok());
  EXPECT_EQ(c.base_url, "http://env:9/v1");
  EXPECT_EQ(c.api_key, "secret");
  EndpointConfig explicit_config;
  explicit_config.base_url = "http://flag/v1";
  ASSERT_TRUE(ApplyEndpointEnvironment(&explicit_config).ok());
  EXPECT_EQ(explicit_config.base_url, "http://flag/v1");
  unsetenv(kEndpointEnvVar);
  unsetenv(kApiKeyEnvVar);
}

TEST(TokenBucketTest, ZeroRateNeverBlocks) {
  TokenBucket bucket(0.0);
  for (int i = 0; i < 1000; ++i) bucket.Acquire();
}

TEST(TokenBucketTest, LimitsRate) {
  TokenBucket bucket(20.0);
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 30; ++i) bucket.Acquire();
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  EXPECT_GE(elapsed, 0.4);
}

}  // namespace
}  // namespace toolrobust
