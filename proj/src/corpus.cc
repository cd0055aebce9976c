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

#include "toolrobust/corpus.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "absl/strings/str_cat.h"

namespace toolrobust {
namespace {

constexpr std::array<std::string_view, 7> kTypeTags = {
    "string", "integer", "number", "boolean", "array", "object", "dict"};

absl::StatusOr<std::string> GetString(const Json& json, const char* key,
                                      bool required) {
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) {
    if (required) return absl::InvalidArgumentError(absl::StrCat("missing key '", key, "'"));
    return std::string();
  }
  if (!it->is_string()) {
    return absl::InvalidArgumentError(absl::StrCat("key '", key, "' must be a string"));
  }
  return it->get<std::string>();
}

bool HasWhitespace(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      return true;
    }
  }
  return false;
}

}  // namespace

const std::string& SourceName(Source s) {
  static const std::string kNames[] = {"bfcl_v3", "apibank", "rotbench", "toolalpaca", "tooleyes"};
  return kNames[static_cast<int>(s)];
}

const std::vector<Source>& AllSources() {
  static const std::vector<Source> kAll = {Source::kBfclV3, Source::kApiBank,
                                           Source::kRotBench,
                                           Source::kToolAlpaca,
                                           Source::kToolEyes};
  return kAll;
}

std::optional<Source> ParseSource(std::string_view name) {
  for (Source s : AllSources()) {
    if (SourceName(s) == name) return s;
  }
  return std::nullopt;
}

const std::string& OutputFormatName(OutputFormat f) {
  static const std::string kNames[] = {"bfcl_ast", "apibank_xml", "react", "toolalpaca_mixed", "react_partial"};
  return kNames[static_cast<int>(f)];
}

std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  for (OutputFormat f :
       {OutputFormat::kBfclAst, OutputFormat::kApiBankXml, OutputFormat::kReact,
        OutputFormat::kToolAlpacaMixed, OutputFormat::kReactPartial}) {
    if (OutputFormatName(f) == name) return f;
  }
  return std::nullopt;
}

OutputFormat FormatForSource(Source s) {
  switch (s) {
    case Source::kBfclV3:
      return OutputFormat::kBfclAst;
    case Source::kApiBank:
      return OutputFormat::kApiBankXml;
    case Source::kRotBench:
      return OutputFormat::kReact;
    case Source::kToolAlpaca:
      return OutputFormat::kToolAlpacaMixed;
    case Source::kToolEyes:
      return OutputFormat::kReactPartial;
  }
  return OutputFormat::kBfclAst;
}

const std::string& RoleName(Role r) {
  static const std::string kNames[] = {"system", "user", "assistant", "tool"};
  return kNames[static_cast<int>(r)];
}

std::optional<Role> ParseRole(std::string_view name) {
  for (Role r : {Role::kSystem, Role::kUser, Role::kAssistant, Role::kTool}) {
    if (RoleName(r) == name) return r;
  }
  return std::nullopt;
}

bool IsValidTypeTag(std::string_view tag) {
  for (std::string_view t : kTypeTags) {
    if (t == tag) return true;
  }
  return false;
}

const ParamSpec* ToolSpec::FindParam(std::string_view param_name) const {
  for (const auto& [name, spec] : parameters) {
    if (name == param_name) return &spec;
  }
  return nullptr;
}

absl::StatusOr<PerturbationDescriptor> MakeDescriptor(std::string_view type_code,
                                                      uint64_t seed) {
  PerturbationDescriptor d;
  d.seed = seed;
  d.type_code = std::string(type_code);
  if (type_code == kCleanTypeCode) {
    d.component = Component::kNone;
    d.method = Method::kRule;
    return d;
  }
  const PerturbationType* t = FindPerturbationType(type_code);
  if (t == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown perturbation type '", std::string(type_code), "'"));
  }
  d.component = t->component;
  d.method = t->method;
  return d;
}

std::optional<size_t> Sample::FinalUserTurnIndex() const {
  for (size_t i = dialog.size(); i > 0; --i) {
    if (dialog[i - 1].role == Role::kUser) return i - 1;
  }
  return std::nullopt;
}

std::vector<size_t> Sample::ToolIndices(std::string_view name) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < tools.size(); ++i) {
    if (tools[i].name == name) out.push_back(i);
  }
  return out;
}

std::string_view Sample::TypeCode() const {
  if (!perturbation.has_value()) return kCleanTypeCode;
  return perturbation->type_code;
}

absl::Status ValidateToolSpec(const ToolSpec& tool) {
  if (tool.name.empty()) return absl::InvalidArgumentError("tool name is empty");
  if (HasWhitespace(tool.name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tool name '", tool.name, "' contains whitespace"));
  }
  std::set<std::string_view> seen;
  for (const auto& [name, spec] : tool.parameters) {
    if (!seen.insert(name).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "tool '", tool.name, "' declares parameter '", name, "' twice"));
    }
    if (!IsValidTypeTag(spec.type_tag)) {
      return absl::InvalidArgumentError(
          absl::StrCat("tool '", tool.name, "' parameter '", name,
                       "' has unknown type '", spec.type_tag, "'"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateSample(const Sample& sample) {
  if (sample.id.empty()) return absl::InvalidArgumentError("sample id is empty");
  if (!sample.FinalUserTurnIndex().has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample '", sample.id, "' has no user turn"));
  }
  if (sample.output_format != FormatForSource(sample.source)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample '", sample.id, "': source ", SourceName(sample.source),
        " requires output_format ", OutputFormatName(FormatForSource(sample.source)),
        ", got ", OutputFormatName(sample.output_format)));
  }
  for (const ToolSpec& tool : sample.tools) {
    absl::Status s = ValidateToolSpec(tool);
    if (!s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample '", sample.id, "': ", s.message()));
    }
  }
  for (const ToolCall& call : sample.golden_answers) {
    if (call.name.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample '", sample.id, "' has a golden call with no name"));
    }
    if (sample.ToolIndices(call.name).empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample '", sample.id, "': golden call '", call.name,
                       "' does not resolve to any tool"));
    }
  }
  if (sample.perturbation.has_value()) {
    const PerturbationDescriptor& d = *sample.perturbation;
    if (d.type_code == kCleanTypeCode) {
      if (d.component != Component::kNone) {
        return absl::InvalidArgumentError(absl::StrCat(
            "sample '", sample.id, "': clean descriptor must have component none"));
      }
    } else {
      const PerturbationType* t = FindPerturbationType(d.type_code);
      if (t == nullptr) {
        return absl::InvalidArgumentError(absl::StrCat(
            "sample '", sample.id, "': unknown perturbation type '", d.type_code, "'"));
      }
      if (t->component != d.component || t->method != d.method) {
        return absl::InvalidArgumentError(absl::StrCat(
            "sample '", sample.id, "': descriptor for '", d.type_code,
            "' must have component ", ComponentName(t->component),
            " and method ", MethodName(t->method)));
      }
    }
  }
  return absl::OkStatus();
}

Json ToolSpecToJson(const ToolSpec& tool) {
  Json properties = Json::object();
  Json required = Json::array();
  for (const auto& [name, spec] : tool.parameters) {
    Json p = Json::object();
    p["type"] = spec.type_tag;
    p["description"] = spec.description;
    if (spec.enum_values.has_value()) {
      Json e = Json::array();
      for (const Value& v : *spec.enum_values) e.push_back(ToJson(v));
      p["enum"] = std::move(e);
    }
    properties[name] = std::move(p);
    if (spec.required) required.push_back(name);
  }
  Json params = Json::object();
  params["type"] = "dict";
  params["properties"] = std::move(properties);
  params["required"] = std::move(required);
  Json out = Json::object();
  out["name"] = tool.name;
  out["description"] = tool.description;
  out["parameters"] = std::move(params);
  return out;
}

absl::StatusOr<ToolSpec> ToolSpecFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("tool must be an object");
  ToolSpec tool;
  TR_ASSIGN_OR_RETURN(tool.name, GetString(json, "name", true));
  TR_ASSIGN_OR_RETURN(tool.description, GetString(json, "description", false));
  auto params_it = json.find("parameters");
  if (params_it != json.end() && !params_it->is_null()) {
    if (!params_it->is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("tool '", tool.name, "': parameters must be an object"));
    }
    std::set<std::string> required;
    auto req_it = params_it->find("required");
    if (req_it != params_it->end() && req_it->is_array()) {
      for (const Json& r : *req_it) {
        if (r.is_string()) required.insert(r.get<std::string>());
      }
    }
    auto props_it = params_it->find("properties");
    if (props_it != params_it->end() && !props_it->is_null()) {
      if (!props_it->is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("tool '", tool.name, "': properties must be an object"));
      }
      for (const auto& [name, p] : props_it->items()) {
        if (!p.is_object()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "tool '", tool.name, "': parameter '", name, "' must be an object"));
        }
        ParamSpec spec;
        TR_ASSIGN_OR_RETURN(spec.type_tag, GetString(p, "type", false));
        if (spec.type_tag.empty()) spec.type_tag = "string";
        TR_ASSIGN_OR_RETURN(spec.description, GetString(p, "description", false));
        spec.required = required.count(name) > 0;
        auto enum_it = p.find("enum");
        if (enum_it != p.end() && enum_it->is_array()) {
          std::vector<Value> values;
          for (const Json& e : *enum_it) values.push_back(FromJson(e));
          spec.enum_values = std::move(values);
        }
        tool.parameters.emplace_back(name, std::move(spec));
      }
    }
  }
  TR_RETURN_IF_ERROR(ValidateToolSpec(tool));
  return tool;
}

Json ToolCallToJson(const ToolCall& call) {
  Json out = Json::object();
  out["name"] = call.name;
  out["parameters"] = ToJson(Value(call.parameters));
  return out;
}

absl::StatusOr<ToolCall> ToolCallFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("tool call must be an object");
  ToolCall call;
  TR_ASSIGN_OR_RETURN(call.name, GetString(json, "name", true));
  if (call.name.empty()) return absl::InvalidArgumentError("tool call name is empty");
  auto it = json.find("parameters");
  if (it != json.end() && !it->is_null()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("tool call '", call.name, "': parameters must be an object"));
    }
    call.parameters = FromJson(*it).as_object();
  }
  return call;
}

Json DescriptorToJson(const PerturbationDescriptor& d) {
  Json out = Json::object();
  out["component"] = std::string(ComponentName(d.component));
  out["type"] = d.type_code;
  out["method"] = std::string(MethodName(d.method));
  out["seed"] = d.seed;
  if (!d.notes.empty()) out["notes"] = d.notes;
  return out;
}

absl::StatusOr<PerturbationDescriptor> DescriptorFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("perturbation must be an object");
  PerturbationDescriptor d;
  TR_ASSIGN_OR_RETURN(std::string component, GetString(json, "component", true));
  std::optional<Component> c = ParseComponent(component);
  if (!c.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown component '", component, "'"));
  }
  d.component = *c;
  TR_ASSIGN_OR_RETURN(d.type_code, GetString(json, "type", true));
  TR_ASSIGN_OR_RETURN(std::string method, GetString(json, "method", true));
  std::optional<Method> m = ParseMethod(method);
  if (!m.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown method '", method, "'"));
  }
  d.method = *m;
  auto seed_it = json.find("seed");
  if (seed_it != json.end()) {
    if (seed_it->is_number_unsigned()) {
      d.seed = seed_it->get<uint64_t>();
    } else if (seed_it->is_number_integer()) {
      d.seed = static_cast<uint64_t>(seed_it->get<int64_t>());
    } else {
      return absl::InvalidArgumentError("perturbation seed must be an integer");
    }
  }
  TR_ASSIGN_OR_RETURN(d.notes, GetString(json, "notes", false));
  return d;
}

Json SampleToJson(const Sample& sample) {
  Json out = Json::object();
  out["id"] = sample.id;
  out["source"] = std::string(SourceName(sample.source));
  Json dialog = Json::array();
  for (const Turn& t : sample.dialog) {
    Json turn = Json::object();
    turn["role"] = std::string(RoleName(t.role));
    turn["content"] = t.content;
    dialog.push_back(std::move(turn));
  }
  out["dialog"] = std::move(dialog);
  Json tools = Json::array();
  for (const ToolSpec& tool : sample.tools) tools.push_back(ToolSpecToJson(tool));
  out["tools"] = std::move(tools);
  Json golden = Json::array();
  for (const ToolCall& c : sample.golden_answers) golden.push_back(ToolCallToJson(c));
  out["golden_answers"] = std::move(golden);
  out["output_format"] = std::string(OutputFormatName(sample.output_format));
  if (sample.perturbation.has_value()) {
    out["perturbation"] = DescriptorToJson(*sample.perturbation);
  }
  return out;
}

absl::StatusOr<Sample> SampleFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("record must be a JSON object");
  Sample sample;
  TR_ASSIGN_OR_RETURN(sample.id, GetString(json, "id", true));
  TR_ASSIGN_OR_RETURN(std::string source, GetString(json, "source", true));
  std::optional<Source> src = ParseSource(source);
  if (!src.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown source tag '", source, "'"));
  }
  sample.source = *src;
  auto dialog_it = json.find("dialog");
  if (dialog_it == json.end() || !dialog_it->is_array()) {
    return absl::InvalidArgumentError("missing array 'dialog'");
  }
  for (const Json& t : *dialog_it) {
    if (!t.is_object()) return absl::InvalidArgumentError("dialog turn must be an object");
    TR_ASSIGN_OR_RETURN(std::string role, GetString(t, "role", true));
    std::optional<Role> r = ParseRole(role);
    if (!r.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown role '", role, "'"));
    }
    Turn turn;
    turn.role = *r;
    TR_ASSIGN_OR_RETURN(turn.content, GetString(t, "content", false));
    sample.dialog.push_back(std::move(turn));
  }
  auto tools_it = json.find("tools");
  if (tools_it != json.end() && !tools_it->is_null()) {
    if (!tools_it->is_array()) return absl::InvalidArgumentError("'tools' must be an array");
    for (const Json& t : *tools_it) {
      TR_ASSIGN_OR_RETURN(ToolSpec tool, ToolSpecFromJson(t));
      sample.tools.push_back(std::move(tool));
    }
  }
  auto golden_it = json.find("golden_answers");
  if (golden_it != json.end() && !golden_it->is_null()) {
    if (!golden_it->is_array()) {
      return absl::InvalidArgumentError("'golden_answers' must be an array");
    }
    for (const Json& g : *golden_it) {
      TR_ASSIGN_OR_RETURN(ToolCall call, ToolCallFromJson(g));
      sample.golden_answers.push_back(std::move(call));
    }
  }
  TR_ASSIGN_OR_RETURN(std::string format, GetString(json, "output_format", true));
  std::optional<OutputFormat> f = ParseOutputFormat(format);
  if (!f.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown output_format '", format, "'"));
  }
  sample.output_format = *f;
  auto pert_it = json.find("perturbation");
  if (pert_it != json.end() && !pert_it->is_null()) {
    TR_ASSIGN_OR_RETURN(PerturbationDescriptor d, DescriptorFromJson(*pert_it));
    sample.perturbation = std::move(d);
  }
  TR_RETURN_IF_ERROR(ValidateSample(sample));
  return sample;
}

std::string SerializeSample(const Sample& sample) {
  return DumpJson(SampleToJson(sample));
}

absl::StatusOr<std::vector<Sample>> ParseSamples(
    std::string_view contents, std::optional<Source> expected_source) {
  std::vector<Sample> out;
  std::set<std::string> ids;
  size_t line_no = 0;
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed JSON record"));
    }
    absl::StatusOr<Sample> sample = SampleFromJson(json);
    if (!sample.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", sample.status().message()));
    }
    if (expected_source.has_value() && sample->source != *expected_source) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": source ", SourceName(sample->source),
          " does not match expected ", SourceName(*expected_source)));
    }
    if (!ids.insert(sample->id).second) {
      return absl::AlreadyExistsError(
          absl::StrCat("line ", line_no, ": duplicate sample id '", sample->id, "'"));
    }
    out.push_back(*std::move(sample));
  }
  return out;
}

absl::StatusOr<std::vector<Sample>> LoadSamples(
    const std::string& path, std::optional<Source> expected_source) {
  TR_ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  absl::StatusOr<std::vector<Sample>> samples =
      ParseSamples(contents, expected_source);
  if (!samples.ok()) {
    return absl::Status(samples.status().code(),
                        absl::StrCat(path, ": ", samples.status().message()));
  }
  return samples;
}

absl::Status SaveSamples(const std::vector<Sample>& samples,
                         const std::string& path) {
  std::string contents;
  for (const Sample& s : samples) {
    contents += SerializeSample(s);
    contents += '\n';
  }
  return WriteFileAtomically(path, contents);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("error reading ", path));
  return ss.str();
}

absl::Status WriteFileAtomically(const std::string& path,
                                 std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) return absl::DataLossError(absl::StrCat("error writing ", path));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot move ", tmp.string(), " to ", path, ": ", ec.message()));
  }
  return absl::OkStatus();
}

}  // namespace toolrobust
