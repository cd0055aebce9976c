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


// Client for OpenAI-compatible chat-completions endpoints.
//
// Requests go to <base_url>/chat/completions. Transport failures, HTTP 429
// and 5xx responses are retried with exponential backoff; other non-2xx
// statuses fail immediately. A token bucket bounds the request rate and a
// semaphore bounds the number of requests in flight.

#ifndef TOOLROBUST_CHAT_CLIENT_H_
#define TOOLROBUST_CHAT_CLIENT_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "toolrobust/status.h"
#include "toolrobust/value.h"

namespace toolrobust {

inline constexpr char kEndpointEnvVar[] = "TOOLROBUST_ENDPOINT";
inline constexpr char kApiKeyEnvVar[] = "TOOLROBUST_API_KEY";

struct EndpointConfig {
  // e.g. "http://127.0.0.1:8000/v1".
  std::string base_url;
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  // Sends chat_template_kwargs.enable_thinking = false.
  bool disable_thinking = true;
  int max_retries = 3;
  double backoff_initial_seconds = 0.5;
  double backoff_max_seconds = 8.0;
  double request_timeout_seconds = 120.0;
  int concurrency_limit = 4;
  // Requests per second; 0 disables the limiter.
  double rate_limit_per_second = 0.0;
};

absl::Status ValidateEndpointConfig(const EndpointConfig& config);

struct ChatMessage {
  std::string role;
  std::string content;
  // Assistant tool calls in wire form (array), when present.
  std::optional<Json> tool_calls;
  std::optional<std::string> tool_call_id;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  // Function schemas in wire form (array), when present.
  std::optional<Json> tools;
};

struct ChatResponse {
  std::string content;
  // choices[0].message.tool_calls, or an empty array.
  Json tool_calls = Json::array();
};

// Wire body for a request; exposed for tests.
Json ChatRequestToJson(const ChatRequest& request, const EndpointConfig& config);
absl::StatusOr<ChatResponse> ParseChatResponse(std::string_view body);

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual absl::StatusOr<ChatResponse> Send(const ChatRequest& request) = 0;
};

class TokenBucket {
 public:
  // rate <= 0 never blocks.
  explicit TokenBucket(double rate_per_second);
  void Acquire();

 private:
  double rate_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}
  void Acquire();
  void Release();

 private:
  int count_;
  std::mutex mu_;
  std::condition_variable cv_;
};

class ChatClient : public ChatTransport {
 public:
  explicit ChatClient(EndpointConfig config);

  absl::StatusOr<ChatResponse> Send(const ChatRequest& request) override;

  // Endpoint requests issued, including retries.
  int64_t request_count() const { return request_count_.load(); }
  const EndpointConfig& config() const { return config_; }

 private:
  absl::StatusOr<ChatResponse> SendOnce(const std::string& body, bool* retryable);

  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  TokenBucket bucket_;
  Semaphore in_flight_;
  std::atomic<int64_t> request_count_{0};
};

// Reads TOOLROBUST_ENDPOINT / TOOLROBUST_API_KEY into `config` where the
// fields are empty. Fails naming the variable when no endpoint is set.
absl::Status ApplyEndpointEnvironment(EndpointConfig* config);

}  // namespace toolrobust

#endif  // TOOLROBUST_CHAT_CLIENT_H_
