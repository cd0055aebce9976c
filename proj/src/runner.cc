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


#include "toolrobust/runner.h"

#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "toolrobust/parallel.h"
#include "toolrobust/parser.h"
#include "toolrobust/taxonomy.h"

namespace toolrobust {
namespace {

constexpr char kSyntheticCallId[] = "call_0";

std::string ChatRole(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
    case Role::kTool: return "user";
  }
  return "user";
}

ChatMessage TurnMessage(const Turn& turn) {
  ChatMessage m;
  m.role = ChatRole(turn.role);
  m.content = turn.role == Role::kTool
                  ? absl::StrCat("Tool response: ", turn.content)
                  : turn.content;
  return m;
}

Json ArgumentsJson(const Json& arguments) {
  if (arguments.is_string()) {
    Json parsed =
        Json::parse(arguments.get<std::string>(), nullptr, false);
    if (!parsed.is_discarded()) return parsed;
  }
  return arguments;
}

absl::StatusOr<PerturbationDescriptor> RecordDescriptor(
    const Sample& sample, const std::optional<std::string>& transition) {
  if (!transition.has_value()) {
    if (sample.perturbation.has_value()) {
      if (sample.perturbation->component == Component::kTransition) {
        return absl::InvalidArgumentError(absl::StrCat(
            "sample '", sample.id,
            "' carries a transition descriptor; run it in transition mode"));
      }
      return *sample.perturbation;
    }
    return MakeDescriptor(kCleanTypeCode, 0);
  }
  if (!sample.perturbation.has_value() ||
      sample.perturbation->type_code == kCleanTypeCode) {
    return MakeDescriptor(*transition, 0);
  }
  if (sample.perturbation->type_code == *transition) {
    return *sample.perturbation;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "sample '", sample.id, "' carries type '",
      sample.perturbation->type_code, "', expected '", *transition,
      "' or clean"));
}

PredictionRecord RunOne(const Sample& sample, PerturbationDescriptor descriptor,
                        ChatTransport& transport, const EvalConfig& config) {
  PredictionRecord record;
  record.sample_id = sample.id;
  record.source = sample.source;
  record.perturbation = std::move(descriptor);

  ChatRequest request = BuildMessages(sample, config.mode);
  absl::StatusOr<ChatResponse> pass1 = transport.Send(request);
  if (!pass1.ok()) {
    record.run_error = pass1.status().ToString();
    return record;
  }
  record.pass1_raw = ResponseText(*pass1);
  record.final_raw = record.pass1_raw;
  ParseOutcome parsed = ParseToolCalls(record.pass1_raw, sample.source);
  record.tool_calls = parsed.tool_calls;
  if (!config.transition_type.has_value()) return record;

  if (parsed.tool_calls.empty()) {
    record.no_injection = true;
    return record;
  }
  std::string error(*TransitionErrorString(*config.transition_type));
  for (ChatMessage& m :
       InjectionMessages(*pass1, parsed.tool_calls, error, config.mode)) {
    request.messages.push_back(std::move(m));
  }
  record.injected_error = error;
  record.tool_calls.clear();
  absl::StatusOr<ChatResponse> pass2 = transport.Send(request);
  if (!pass2.ok()) {
    record.pass2_raw = "";
    record.final_raw = "";
    record.run_error = pass2.status().ToString();
    return record;
  }
  record.pass2_raw = ResponseText(*pass2);
  record.final_raw = *record.pass2_raw;
  record.tool_calls = ParseToolCalls(record.final_raw, sample.source).tool_calls;
  return record;
}

absl::StatusOr<std::vector<PredictionRecord>> RunAll(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config) {
  TR_RETURN_IF_ERROR(ValidateEvalConfig(config));
  std::vector<PerturbationDescriptor> descriptors;
  descriptors.reserve(samples.size());
  for (const Sample& s : samples) {
    TR_ASSIGN_OR_RETURN(PerturbationDescriptor d,
                        RecordDescriptor(s, config.transition_type));
    descriptors.push_back(std::move(d));
  }
  std::vector<PredictionRecord> records(samples.size());
  ParallelFor(samples.size(), config.endpoint.concurrency_limit,
              [&](size_t i) {
                records[i] = RunOne(samples[i], descriptors[i], transport,
                                    config);
                return true;
              });
  return records;
}

}  // namespace

const std::string& RunModeName(RunMode mode) {
  static const std::string kNames[] = {"fc", "prompt"};
  return kNames[static_cast<int>(mode)];
}

std::optional<RunMode> ParseRunMode(std::string_view name) {
  for (RunMode m : {RunMode::kFc, RunMode::kPrompt}) {
    if (RunModeName(m) == name) return m;
  }
  return std::nullopt;
}

absl::Status ValidateEvalConfig(const EvalConfig& config) {
  TR_RETURN_IF_ERROR(ValidateEndpointConfig(config.endpoint));
  if (config.transition_type.has_value() &&
      !IsTransitionType(*config.transition_type)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "'", *config.transition_type, "' is not a transition type"));
  }
  return absl::OkStatus();
}

std::string FormatInstruction(OutputFormat format) {
  switch (format) {
    case OutputFormat::kBfclAst:
      return "Respond with the function call(s) only, in the form "
             "[func_name1(param1=value1, param2=value2), func_name2(...)]. "
             "Do not include any other text.";
    case OutputFormat::kApiBankXml:
      return "Respond with the API call in the form "
             "<tool_call>{\"name\": \"ApiName\", \"parameters\": "
             "{\"key\": \"value\"}}</tool_call>.";
    case OutputFormat::kReact:
    case OutputFormat::kToolAlpacaMixed:
    case OutputFormat::kReactPartial:
      return "Respond in the following format:\n"
             "Thought: your reasoning\n"
             "Action: the tool name\n"
             "Action Input: the arguments as a JSON object";
  }
  return "";
}

std::string RenderToolRegistry(const std::vector<ToolSpec>& tools) {
  std::string out = "You have access to the following tools:\n";
  for (const ToolSpec& tool : tools) {
    absl::StrAppend(&out, "\n### ", tool.name, "\n");
    if (!tool.description.empty()) absl::StrAppend(&out, tool.description, "\n");
    if (tool.parameters.empty()) {
      absl::StrAppend(&out, "Parameters: none\n");
      continue;
    }
    absl::StrAppend(&out, "Parameters:\n");
    for (const auto& [name, spec] : tool.parameters) {
      absl::StrAppend(&out, "- ", name, " (", spec.type_tag,
                      spec.required ? ", required" : ", optional", ")");
      if (!spec.description.empty()) absl::StrAppend(&out, ": ", spec.description);
      if (spec.enum_values.has_value()) {
        std::vector<std::string> values;
        for (const Value& v : *spec.enum_values) values.push_back(ToJsonString(v));
        absl::StrAppend(&out, " Allowed values: ", absl::StrJoin(values, ", "),
                        ".");
      }
      absl::StrAppend(&out, "\n");
    }
  }
  return out;
}

Json ToolSchemas(const std::vector<ToolSpec>& tools) {
  Json out = Json::array();
  for (const ToolSpec& tool : tools) {
    Json params = Json::object();
    params["type"] = "object";
    params["properties"] = Json::object();
    Json required = Json::array();
    for (const auto& [name, spec] : tool.parameters) {
      Json p = Json::object();
      p["type"] = spec.type_tag == "dict" ? std::string("object") : spec.type_tag;
      if (!spec.description.empty()) p["description"] = spec.description;
      if (spec.enum_values.has_value()) {
        p["enum"] = Json::array();
        for (const Value& v : *spec.enum_values) p["enum"].push_back(ToJson(v));
      }
      params["properties"][name] = std::move(p);
      if (spec.required) required.push_back(name);
    }
    params["required"] = std::move(required);
    Json fn = Json::object();
    fn["name"] = tool.name;
    fn["description"] = tool.description;
    fn["parameters"] = std::move(params);
    Json entry = Json::object();
    entry["type"] = "function";
    entry["function"] = std::move(fn);
    out.push_back(std::move(entry));
  }
  return out;
}

ChatRequest BuildMessages(const Sample& sample, RunMode mode) {
  ChatRequest request;
  std::string sample_system;
  for (const Turn& turn : sample.dialog) {
    if (turn.role == Role::kSystem) {
      if (!sample_system.empty()) sample_system.append("\n\n");
      sample_system.append(turn.content);
    }
  }
  if (mode == RunMode::kPrompt) {
    std::string system = absl::StrCat(RenderToolRegistry(sample.tools), "\n",
                                      FormatInstruction(sample.output_format));
    if (!sample_system.empty()) absl::StrAppend(&system, "\n\n", sample_system);
    request.messages.push_back({"system", system, std::nullopt, std::nullopt});
  } else {
    if (!sample_system.empty()) {
      request.messages.push_back(
          {"system", sample_system, std::nullopt, std::nullopt});
    }
    request.tools = ToolSchemas(sample.tools);
  }
  for (const Turn& turn : sample.dialog) {
    if (turn.role != Role::kSystem) request.messages.push_back(TurnMessage(turn));
  }
  return request;
}

std::string ResponseText(const ChatResponse& response) {
  std::vector<std::string> parts;
  if (!response.content.empty()) parts.push_back(response.content);
  for (const Json& call : response.tool_calls) {
    const Json* fn = &call;
    if (call.contains("function") && call["function"].is_object()) {
      fn = &call["function"];
    }
    Json blob = Json::object();
    blob["name"] = fn->contains("name") ? (*fn)["name"] : Json("");
    blob["arguments"] = fn->contains("arguments")
                            ? ArgumentsJson((*fn)["arguments"])
                            : Json::object();
    parts.push_back(absl::StrCat("<tool_call>", DumpJson(blob), "</tool_call>"));
  }
  return absl::StrJoin(parts, "\n");
}

std::vector<ChatMessage> InjectionMessages(const ChatResponse& pass1,
                                           const std::vector<ToolCall>& parsed,
                                           std::string_view error,
                                           RunMode mode) {
  std::vector<ChatMessage> out;
  if (mode == RunMode::kPrompt) {
    out.push_back({"assistant", ResponseText(pass1), std::nullopt, std::nullopt});
    out.push_back({"user", absl::StrCat("Tool response: ", std::string(error)),
                   std::nullopt, std::nullopt});
    return out;
  }
  Json call;
  if (!pass1.tool_calls.empty()) {
    call = pass1.tool_calls.front();
    if (!call.contains("id") || !call["id"].is_string() ||
        call["id"].get<std::string>().empty()) {
      call["id"] = kSyntheticCallId;
    }
  } else {
    Json fn = Json::object();
    fn["name"] = parsed.front().name;
    fn["arguments"] = DumpJson(ToJson(Value(parsed.front().parameters)));
    call = Json::object();
    call["id"] = kSyntheticCallId;
    call["type"] = "function";
    call["function"] = std::move(fn);
  }
  std::string id = call["id"].get<std::string>();
  out.push_back({"assistant", pass1.content, Json::array({call}), std::nullopt});
  out.push_back({"tool", std::string(error), std::nullopt, id});
  return out;
}

absl::StatusOr<std::vector<PredictionRecord>> RunStatic(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config) {
  if (config.transition_type.has_value()) {
    return absl::InvalidArgumentError("static run with a transition type set");
  }
  return RunAll(samples, transport, config);
}

absl::StatusOr<std::vector<PredictionRecord>> RunTransition(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config) {
  if (!config.transition_type.has_value()) {
    return absl::InvalidArgumentError("transition run needs a transition type");
  }
  return RunAll(samples, transport, config);
}

absl::StatusOr<std::vector<PredictionRecord>> RunSamples(
    const std::vector<Sample>& samples, ChatTransport& transport,
    const EvalConfig& config) {
  return config.transition_type.has_value()
             ? RunTransition(samples, transport, config)
             : RunStatic(samples, transport, config);
}

}  // namespace toolrobust
