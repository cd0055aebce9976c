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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "absl/strings/str_cat.h"
#include "httplib.h"

namespace toolrobust {

absl::Status ValidateEndpointConfig(const EndpointConfig& config) {
  if (config.base_url.empty()) {
    return absl::InvalidArgumentError("endpoint base URL is empty");
  }
  if (!(config.temperature >= 0.0)) {
    return absl::InvalidArgumentError("temperature must be >= 0");
  }
  if (config.max_tokens < 1) return absl::InvalidArgumentError("max_tokens must be >= 1");
  if (config.concurrency_limit < 1) {
    return absl::InvalidArgumentError("concurrency limit must be >= 1");
  }
  if (config.max_retries < 0) return absl::InvalidArgumentError("max_retries must be >= 0");
  if (!(config.request_timeout_seconds > 0.0)) {
    return absl::InvalidArgumentError("request timeout must be positive");
  }
  return absl::OkStatus();
}

Json ChatRequestToJson(const ChatRequest& request, const EndpointConfig& config) {
  Json body = Json::object();
  body["model"] = config.model;
  Json messages = Json::array();
  for (const ChatMessage& m : request.messages) {
    Json msg = Json::object();
    msg["role"] = m.role;
    msg["content"] = m.content;
    if (m.tool_calls.has_value()) msg["tool_calls"] = *m.tool_calls;
    if (m.tool_call_id.has_value()) msg["tool_call_id"] = *m.tool_call_id;
    messages.push_back(std::move(msg));
  }
  body["messages"] = std::move(messages);
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_tokens;
  if (request.tools.has_value()) body["tools"] = *request.tools;
  if (config.disable_thinking) {
    body["chat_template_kwargs"] = Json{{"enable_thinking", false}};
  }
  return body;
}

absl::StatusOr<ChatResponse> ParseChatResponse(std::string_view body) {
  Json json = Json::parse(body, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    return absl::UnavailableError("endpoint returned a non-JSON body");
  }
  auto choices = json.find("choices");
  if (choices == json.end() || !choices->is_array() || choices->empty()) {
    return absl::UnavailableError("endpoint response has no choices");
  }
  const Json& first = (*choices)[0];
  auto message = first.find("message");
  if (message == first.end() || !message->is_object()) {
    return absl::UnavailableError("endpoint response has no message");
  }
  ChatResponse out;
  auto content = message->find("content");
  if (content != message->end() && content->is_string()) {
    out.content = content->get<std::string>();
  }
  auto calls = message->find("tool_calls");
  if (calls != message->end() && calls->is_array()) out.tool_calls = *calls;
  return out;
}

TokenBucket::TokenBucket(double rate_per_second)
    : rate_(rate_per_second),
      capacity_(std::max(1.0, rate_per_second)),
      tokens_(std::max(1.0, rate_per_second)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::Acquire() {
  if (rate_ <= 0.0) return;
  while (true) {
    double wait_seconds = 0.0;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto now = std::chrono::steady_clock::now();
      double elapsed = std::chrono::duration<double>(now - last_).count();
      last_ = now;
      tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait_seconds = (1.0 - tokens_) / rate_;
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_seconds));
  }
}

void Semaphore::Acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [this] { return count_ > 0; });
  --count_;
}

void Semaphore::Release() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++count_;
  }
  cv_.notify_one();
}

ChatClient::ChatClient(EndpointConfig config)
    : config_(std::move(config)),
      bucket_(config_.rate_limit_per_second),
      in_flight_(std::max(1, config_.concurrency_limit)) {
  std::string url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  size_t scheme_end = url.find("://");
  size_t path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = url;
    path_ = "";
  } else {
    scheme_host_port_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
  path_ += "/chat/completions";
}

absl::StatusOr<ChatResponse> ChatClient::SendOnce(const std::string& body,
                                                  bool* retryable) {
  *retryable = false;
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported endpoint URL '", config_.base_url, "'"));
  }
  auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.request_timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", absl::StrCat("Bearer ", config_.api_key));
  }
  ++request_count_;
  httplib::Result res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    *retryable = true;
    return absl::UnavailableError(absl::StrCat(
        "transport failure contacting ", config_.base_url, ": ",
        httplib::to_string(res.error())));
  }
  if (res->status == 429 || res->status >= 500) {
    *retryable = true;
    return absl::UnavailableError(
        absl::StrCat("endpoint returned HTTP ", res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    return absl::UnavailableError(
        absl::StrCat("endpoint returned HTTP ", res->status, ": ", res->body));
  }
  return ParseChatResponse(res->body);
}

absl::StatusOr<ChatResponse> ChatClient::Send(const ChatRequest& request) {
  const std::string body = DumpJson(ChatRequestToJson(request, config_));
  double backoff = config_.backoff_initial_seconds;
  absl::Status last;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0 && backoff > 0.0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff = std::min(config_.backoff_max_seconds, backoff * 2.0);
    }
    bucket_.Acquire();
    in_flight_.Acquire();
    bool retryable = false;
    absl::StatusOr<ChatResponse> r = SendOnce(body, &retryable);
    in_flight_.Release();
    if (r.ok() || !retryable) return r;
    last = r.status();
  }
  return absl::UnavailableError(absl::StrCat(
      last.message(), " (after ", config_.max_retries + 1, " attempts)"));
}

absl::Status ApplyEndpointEnvironment(EndpointConfig* config) {
  if (config->base_url.empty()) {
    const char* endpoint = std::getenv(kEndpointEnvVar);
    if (endpoint == nullptr || *endpoint == '\0') {
      return absl::InvalidArgumentError(absl::StrCat(
          "no endpoint configured: set ", kEndpointEnvVar, " or pass --endpoint"));
    }
    config->base_url = endpoint;
  }
  if (config->api_key.empty()) {
    const char* key = std::getenv(kApiKeyEnvVar);
    if (key != nullptr) config->api_key = key;
  }
  return absl::OkStatus();
}

}  // namespace toolrobust
