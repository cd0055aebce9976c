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


// Model execution: one pass for static samples, two passes with an injected
// transient error for transition samples.

#ifndef TOOLROBUST_RUNNER_H_
#define TOOLROBUST_RUNNER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/chat_client.h"
#include "toolrobust/corpus.h"
#include "toolrobust/record.h"
#include "toolrobust/status.h"

namespace toolrobust {

// fc passes the registry through the tools= field; prompt renders it into
// the system message.
enum class RunMode { kFc, kPrompt };

const std::string& RunModeName(RunMode mode);
std::optional<RunMode> ParseRunMode(std::string_view name);

struct EvalConfig {
  EndpointConfig endpoint;
  RunMode mode = RunMode::kPrompt;
  // Set for transition runs; one of the six runtime codes.
  std::optional<std::string> transition_type;
};

absl::Status ValidateEvalConfig(const EvalConfig& config);

// Output-format instruction appended to the prompt-mode system message.
std::string FormatInstruction(OutputFormat format);
// Human-readable registry listing used in prompt mode.
std::string RenderToolRegistry(const std::vector<ToolSpec>& tools);
// OpenAI function schemas for fc mode.
Json ToolSchemas(const std::vector<ToolSpec>& tools);

ChatRequest BuildMessages(const Sample& sample, RunMode mode);

// Completion text handed to the parser. Native tool calls are appended as
// <tool_call>{"name": ..., "arguments": ...}</tool_call> lines.
std::string ResponseText(const ChatResponse& response);

// Messages appended before the recovery pass.
std::vector<ChatMessage> InjectionMessages(const ChatResponse& pass1,
                                           const std::vector<ToolCall>& parsed,
                                           std::string_view error,
                                           RunMode mode);

// One record per sample, in input order. Endpoint failures become records
// with run_error set; other errors abort.
absl::StatusOr<std::vector<PredictionRecord>> RunStatic(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config);

absl::StatusOr<std::vector<PredictionRecord>> RunTransition(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config);

// RunTransition when config.transition_type is set, else RunStatic.
absl::StatusOr<std::vector<PredictionRecord>> RunSamples(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config);

}  // namespace toolrobust

#endif  // TOOLROBUST_RUNNER_H_
