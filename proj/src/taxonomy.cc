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

#include "toolrobust/taxonomy.h"

namespace toolrobust {
namespace {

constexpr std::array<PerturbationType, 22> kTypes = {{
    {"realistic_typos", "Typo", Component::kObservation, Method::kLlm},
    {"query_paraphrase", "QueryPara", Component::kObservation, Method::kLlm},
    {"paraphrase_tool_description", "ToolPara", Component::kObservation,
     Method::kLlm},
    {"paraphrase_parameter_description", "ParamPara", Component::kObservation,
     Method::kLlm},
    {"same_name_A", "Dup-NoDesc", Component::kAction, Method::kRule},
    {"same_name_B", "Dup-Desc", Component::kAction, Method::kRule},
    {"same_name_C", "Dup-WrongP", Component::kAction, Method::kRule},
    {"same_name_D", "Dup-DescWP", Component::kAction, Method::kRule},
    {"same_name_E", "Dup-SwapDP", Component::kAction, Method::kRule},
    {"redundant", "RedunTool", Component::kAction, Method::kLlm},
    {"CD", "MisDesc", Component::kReward, Method::kRule},
    {"TD", "TimeDesc", Component::kReward, Method::kRule},
    {"CD_NT", "MisDesc-N", Component::kReward, Method::kRule},
    {"TD_NT", "TimeDesc-N", Component::kReward, Method::kRule},
    {"CD_AB", "MisDesc-Abbr", Component::kReward, Method::kRule},
    {"TD_AB", "TimeDesc-Abbr", Component::kReward, Method::kRule},
    {"transient_timeout", "Timeout", Component::kTransition, Method::kRuntime},
    {"transient_rate_limit", "RateLim", Component::kTransition,
     Method::kRuntime},
    {"transient_auth_error", "AuthErr", Component::kTransition,
     Method::kRuntime},
    {"transient_server_error", "5xxErr", Component::kTransition,
     Method::kRuntime},
    {"transient_malformed_response", "Malform", Component::kTransition,
     Method::kRuntime},
    {"transient_schema_drift", "SchemaD", Component::kTransition,
     Method::kRuntime},
}};

struct ErrorString {
  std::string_view code;
  std::string_view text;
};

constexpr std::array<ErrorString, 6> kErrorStrings = {{
    {"transient_timeout",
     "Tool execution timed out after the configured request timeout. The "
     "remote endpoint did not respond within the allotted time."},
    {"transient_rate_limit",
     "HTTP 429 Too Many Requests. The provider rejected the call because the "
     "per-minute rate limit has been exceeded."},
    {"transient_auth_error",
     "HTTP 401 Unauthorized. The provider rejected the call because the "
     "supplied credentials are invalid or expired."},
    {"transient_server_error",
     "HTTP 500 Internal Server Error. The remote endpoint failed to handle "
     "the request."},
    {"transient_malformed_response",
     "Malformed response from tool execution: the body could not be parsed "
     "as JSON."},
    {"transient_schema_drift",
     "Schema validation failed: the response did not match the tool's "
     "declared output schema (extra/missing fields)."},
}};

}  // namespace

const std::string& ComponentName(Component c) {
  static const std::string kNames[] = {"observation", "action", "reward", "transition", "none"};
  return kNames[static_cast<int>(c)];
}

std::optional<Component> ParseComponent(std::string_view name) {
  for (Component c : {Component::kObservation, Component::kAction,
                      Component::kReward, Component::kTransition,
                      Component::kNone}) {
    if (ComponentName(c) == name) return c;
  }
  return std::nullopt;
}

const std::string& MethodName(Method m) {
  static const std::string kNames[] = {"rule", "llm", "runtime"};
  return kNames[static_cast<int>(m)];
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (Method m : {Method::kRule, Method::kLlm, Method::kRuntime}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

const std::array<PerturbationType, 22>& AllPerturbationTypes() {
  return kTypes;
}

const PerturbationType* FindPerturbationType(std::string_view code) {
  for (const PerturbationType& t : kTypes) {
    if (t.code == code) return &t;
  }
  return nullptr;
}

const PerturbationType* FindPerturbationTypeByDisplayName(
    std::string_view display_name) {
  for (const PerturbationType& t : kTypes) {
    if (t.display_name == display_name) return &t;
  }
  return nullptr;
}

std::vector<std::string> StaticTypeCodes() {
  std::vector<std::string> out;
  for (const PerturbationType& t : kTypes) {
    if (t.component != Component::kTransition) out.emplace_back(t.code);
  }
  return out;
}

std::vector<std::string> TypeCodesFor(Component component) {
  std::vector<std::string> out;
  for (const PerturbationType& t : kTypes) {
    if (t.component == component) out.emplace_back(t.code);
  }
  return out;
}

bool IsTransitionType(std::string_view code) {
  const PerturbationType* t = FindPerturbationType(code);
  return t != nullptr && t->component == Component::kTransition;
}

std::optional<std::string_view> TransitionErrorString(std::string_view code) {
  for (const ErrorString& e : kErrorStrings) {
    if (e.code == code) return e.text;
  }
  return std::nullopt;
}

}  // namespace toolrobust
