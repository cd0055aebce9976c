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

// Data model for tool-use samples and their JSONL on-disk form.
//
// One JSONL line holds one sample:
//
//   {"id": "apibank__level1_101", "source": "apibank",
//    "dialog": [{"role": "user", "content": "..."}],
//    "tools": [{"name": "AddAgenda", "description": "...",
//               "parameters": {"type": "dict",
//                              "properties": {"token": {"type": "string",
//                                                       "description": "..."}},
//                              "required": ["token"]}}],
//    "golden_answers": [{"name": "AddAgenda", "parameters": {...}}],
//    "output_format": "apibank_xml",
//    "perturbation": {"component": "action", "type": "same_name_A",
//                     "method": "rule", "seed": 7}}
//
// Serialization is canonical: keys are emitted in a fixed order, tool and
// parameter order is preserved, and argument maps are emitted sorted.

#ifndef TOOLROBUST_CORPUS_H_
#define TOOLROBUST_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toolrobust/status.h"
#include "toolrobust/taxonomy.h"
#include "toolrobust/value.h"

namespace toolrobust {

enum class Source { kBfclV3, kApiBank, kRotBench, kToolAlpaca, kToolEyes };
enum class OutputFormat {
  kBfclAst,
  kApiBankXml,
  kReact,
  kToolAlpacaMixed,
  kReactPartial
};
enum class Role { kSystem, kUser, kAssistant, kTool };

const std::string& SourceName(Source s);
std::optional<Source> ParseSource(std::string_view name);
const std::vector<Source>& AllSources();
const std::string& OutputFormatName(OutputFormat f);
std::optional<OutputFormat> ParseOutputFormat(std::string_view name);
// Fixed source -> expected output format mapping.
OutputFormat FormatForSource(Source s);
const std::string& RoleName(Role r);
std::optional<Role> ParseRole(std::string_view name);

// Closed set: string, integer, number, boolean, array, object, dict.
bool IsValidTypeTag(std::string_view tag);

struct ParamSpec {
  std::string type_tag = "string";
  std::string description;
  bool required = false;
  std::optional<std::vector<Value>> enum_values;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct ToolSpec {
  std::string name;
  std::string description;
  // Ordered; names unique.
  std::vector<std::pair<std::string, ParamSpec>> parameters;

  const ParamSpec* FindParam(std::string_view param_name) const;

  friend bool operator==(const ToolSpec&, const ToolSpec&) = default;
};

struct ToolCall {
  std::string name;
  Value::Object parameters;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct Turn {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct PerturbationDescriptor {
  Component component = Component::kNone;
  std::string type_code = std::string(kCleanTypeCode);
  Method method = Method::kRule;
  uint64_t seed = 0;
  // Free-form provenance, e.g. which generation path produced the sample.
  std::string notes;

  friend bool operator==(const PerturbationDescriptor&,
                         const PerturbationDescriptor&) = default;
};

// Descriptor for a type code with component and method looked up from the
// taxonomy; "clean" maps to component none.
absl::StatusOr<PerturbationDescriptor> MakeDescriptor(std::string_view type_code,
                                                      uint64_t seed);

struct Sample {
  std::string id;
  Source source = Source::kBfclV3;
  std::vector<Turn> dialog;
  std::vector<ToolSpec> tools;
  std::vector<ToolCall> golden_answers;
  OutputFormat output_format = OutputFormat::kBfclAst;
  std::optional<PerturbationDescriptor> perturbation;

  // Index of the last user turn, if any.
  std::optional<size_t> FinalUserTurnIndex() const;
  // Indices of tools whose name equals `name`.
  std::vector<size_t> ToolIndices(std::string_view name) const;
  // Type code of the attached descriptor, or "clean".
  std::string_view TypeCode() const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

absl::Status ValidateToolSpec(const ToolSpec& tool);
absl::Status ValidateSample(const Sample& sample);

Json ToolSpecToJson(const ToolSpec& tool);
absl::StatusOr<ToolSpec> ToolSpecFromJson(const Json& json);
Json ToolCallToJson(const ToolCall& call);
absl::StatusOr<ToolCall> ToolCallFromJson(const Json& json);
Json DescriptorToJson(const PerturbationDescriptor& d);
absl::StatusOr<PerturbationDescriptor> DescriptorFromJson(const Json& json);
Json SampleToJson(const Sample& sample);
// Decodes and validates one record.
absl::StatusOr<Sample> SampleFromJson(const Json& json);

std::string SerializeSample(const Sample& sample);

// Reads one sample per line. Blank lines are skipped. Errors name the
// offending 1-based line number.
absl::StatusOr<std::vector<Sample>> LoadSamples(
    const std::string& path,
    std::optional<Source> expected_source = std::nullopt);
absl::StatusOr<std::vector<Sample>> ParseSamples(
    std::string_view contents,
    std::optional<Source> expected_source = std::nullopt);

absl::Status SaveSamples(const std::vector<Sample>& samples,
                         const std::string& path);

// File helpers shared by the on-disk formats. WriteFileAtomically writes to
// a sibling temp file and renames it into place.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFileAtomically(const std::string& path,
                                 std::string_view contents);

}  // namespace toolrobust

#endif  // TOOLROBUST_CORPUS_H_
