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


// Format-tolerant extraction of tool calls from raw model text.
//
// Six syntax families are recognised:
//   1 bracketed     [f(a=1)], [f(a:1)], [func_name="f", params={...}]
//   2 xml           <tool_call>{json}</tool_call>, <tool>f</tool>\n{json},
//                   <tool name="f" parameters={...}/>, <toolcall tool="f">,
//                   <tool_call tool_name="f">
//   3 react         Action: f / Action Input: {json}, ActionCode: alias
//   4 ad hoc        Function: f\nParameters: {...}, f: {json}, f?a=1&b=2
//   5 json blob     {"name": "f", "arguments": {...}} and aliases
//   6 bare call     f(a=1)
//
// Each source tries its own ordered family list; the first family that yields
// at least one call wins. Parsing never fails: unrecognised text produces an
// empty outcome with variant "none".

#ifndef TOOLROBUST_PARSER_H_
#define TOOLROBUST_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/corpus.h"
#include "toolrobust/status.h"

namespace toolrobust {

enum class Family {
  kBracketed = 1,
  kXml = 2,
  kReact = 3,
  kAdHoc = 4,
  kJsonBlob = 5,
  kBareCall = 6,
};

struct ParseOutcome {
  std::vector<ToolCall> tool_calls;
  // Tag of the concrete syntax that matched first, or "none".
  std::string variant_used = "none";
};

// Default family order for a source.
const std::vector<Family>& DefaultDispatchOrder(Source source);

ParseOutcome ParseToolCalls(std::string_view raw, Source source);
ParseOutcome ParseToolCalls(std::string_view raw,
                            const std::vector<Family>& order);

// Runs a single family on already fence-stripped text.
ParseOutcome ParseFamily(std::string_view text, Family family);

// Removes markdown code fences (``` and ```lang markers) and trims.
std::string StripCodeFences(std::string_view raw);

// Serialization variant tags, one or more per family.
const std::vector<std::string>& SerializationVariants();
absl::StatusOr<Family> VariantFamily(std::string_view variant);
// A source whose dispatch order parses `variant` output back unambiguously.
absl::StatusOr<Source> SourceForVariant(std::string_view variant);

// Renders `call` in the concrete syntax `variant`. Returns InvalidArgument
// when the variant cannot represent the call's names or values.
absl::StatusOr<std::string> SerializeCall(const ToolCall& call,
                                          std::string_view variant);

// Keys accepted as the tool name / argument map in JSON-shaped calls.
const std::vector<std::string>& NameAliases();
const std::vector<std::string>& ParamAliases();

}  // namespace toolrobust

#endif  // TOOLROBUST_PARSER_H_
