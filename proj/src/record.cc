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


#include "toolrobust/record.h"

#include "absl/strings/str_cat.h"

namespace toolrobust {
namespace {

absl::StatusOr<std::string> RequiredString(const Json& json, const char* key) {
  auto it = json.find(key);
  if (it == json.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing string key '", key, "'"));
  }
  return it->get<std::string>();
}

absl::StatusOr<std::optional<std::string>> OptionalString(const Json& json,
                                                          const char* key) {
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) return std::optional<std::string>();
  if (!it->is_string()) {
    return absl::InvalidArgumentError(absl::StrCat("key '", key, "' must be a string"));
  }
  return std::optional<std::string>(it->get<std::string>());
}

}  // namespace

const std::string& ErrorModeName(ErrorMode mode) {
  static const std::string kNames[] = {"empty_tool_call", "omitted_tool_call", "wrong_call", "other"};
  return kNames[static_cast<int>(mode)];
}

const std::vector<ErrorMode>& AllErrorModes() {
  static const std::vector<ErrorMode> kAll = {
      ErrorMode::kEmptyToolCall, ErrorMode::kOmittedToolCall,
      ErrorMode::kWrongCall, ErrorMode::kOther};
  return kAll;
}

std::optional<ErrorMode> ParseErrorMode(std::string_view name) {
  for (ErrorMode m : AllErrorModes()) {
    if (ErrorModeName(m) == name) return m;
  }
  return std::nullopt;
}

Json RecordToJson(const PredictionRecord& record) {
  Json out = Json::object();
  out["sample_id"] = record.sample_id;
  out["source"] = std::string(SourceName(record.source));
  out["perturbation"] = DescriptorToJson(record.perturbation);
  out["pass1_raw"] = record.pass1_raw;
  out["injected_error"] =
      record.injected_error.has_value() ? Json(*record.injected_error) : Json();
  out["pass2_raw"] =
      record.pass2_raw.has_value() ? Json(*record.pass2_raw) : Json();
  out["final_raw"] = record.final_raw;
  Json calls = Json::array();
  for (const ToolCall& c : record.tool_calls) calls.push_back(ToolCallToJson(c));
  out["tool_calls"] = std::move(calls);
  out["score"] = record.score.has_value() ? Json(*record.score) : Json();
  out["error_mode"] = record.error_mode.has_value()
                          ? Json(std::string(ErrorModeName(*record.error_mode)))
                          : Json();
  out["no_injection"] = record.no_injection;
  if (record.run_error.has_value()) out["run_error"] = *record.run_error;
  return out;
}

absl::StatusOr<PredictionRecord> RecordFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("record must be an object");
  PredictionRecord r;
  TR_ASSIGN_OR_RETURN(r.sample_id, RequiredString(json, "sample_id"));
  TR_ASSIGN_OR_RETURN(std::string source, RequiredString(json, "source"));
  std::optional<Source> src = ParseSource(source);
  if (!src.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown source tag '", source, "'"));
  }
  r.source = *src;
  auto pert = json.find("perturbation");
  if (pert != json.end() && !pert->is_null()) {
    TR_ASSIGN_OR_RETURN(r.perturbation, DescriptorFromJson(*pert));
  }
  TR_ASSIGN_OR_RETURN(r.pass1_raw, RequiredString(json, "pass1_raw"));
  TR_ASSIGN_OR_RETURN(r.injected_error, OptionalString(json, "injected_error"));
  TR_ASSIGN_OR_RETURN(r.pass2_raw, OptionalString(json, "pass2_raw"));
  TR_ASSIGN_OR_RETURN(r.final_raw, RequiredString(json, "final_raw"));
  auto calls = json.find("tool_calls");
  if (calls != json.end() && calls->is_array()) {
    for (const Json& c : *calls) {
      TR_ASSIGN_OR_RETURN(ToolCall call, ToolCallFromJson(c));
      r.tool_calls.push_back(std::move(call));
    }
  }
  auto score = json.find("score");
  if (score != json.end() && !score->is_null()) {
    if (!score->is_number()) return absl::InvalidArgumentError("score must be a number");
    double s = score->get<double>();
    if (!(s >= 0.0 && s <= 1.0)) {
      return absl::OutOfRangeError("score must lie in [0, 1]");
    }
    r.score = s;
  }
  TR_ASSIGN_OR_RETURN(std::optional<std::string> mode,
                      OptionalString(json, "error_mode"));
  if (mode.has_value()) {
    r.error_mode = ParseErrorMode(*mode);
    if (!r.error_mode.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown error_mode '", *mode, "'"));
    }
  }
  auto ni = json.find("no_injection");
  if (ni != json.end() && ni->is_boolean()) r.no_injection = ni->get<bool>();
  TR_ASSIGN_OR_RETURN(r.run_error, OptionalString(json, "run_error"));
  return r;
}

absl::StatusOr<std::vector<PredictionRecord>> ParseRecords(
    std::string_view contents) {
  std::vector<PredictionRecord> out;
  size_t line_no = 0;
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed JSON record"));
    }
    absl::StatusOr<PredictionRecord> r = RecordFromJson(json);
    if (!r.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", r.status().message()));
    }
    out.push_back(*std::move(r));
  }
  return out;
}

absl::StatusOr<std::vector<PredictionRecord>> LoadRecords(
    const std::string& path) {
  TR_ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  absl::StatusOr<std::vector<PredictionRecord>> records = ParseRecords(contents);
  if (!records.ok()) {
    return absl::Status(records.status().code(),
                        absl::StrCat(path, ": ", records.status().message()));
  }
  return records;
}

std::string SerializeRecords(const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const PredictionRecord& r : records) {
    out += DumpJson(RecordToJson(r));
    out += '\n';
  }
  return out;
}

absl::Status SaveRecords(const std::vector<PredictionRecord>& records,
                         const std::string& path) {
  return WriteFileAtomically(path, SerializeRecords(records));
}

}  // namespace toolrobust
