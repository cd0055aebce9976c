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


#include "toolrobust/rewriter.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "toolrobust/corpus.h"
#include "toolrobust/rng.h"

namespace toolrobust {
namespace {

const std::vector<PromptTemplate>& Templates() {
  static const std::vector<PromptTemplate> kTemplates = {
    {TemplateId::kTypos, "typos",
     "Add realistic typing errors to the following query, simulating "
     "natural human typos. [query] Requirements: add 2–4 realistic typos "
     "that humans commonly make when typing quickly; include common typo "
     "types (adjacent key hits e→r, character swaps 'teh'→'the', missing "
     "letters, doubled letters, common misspellings); DO NOT change any "
     "numbers, dates, proper nouns, or technical terms; DO NOT change "
     "the meaning or intent of the query; output the perturbed query "
     "only.",
     0x79f4fa751d1583e7ULL},
    {TemplateId::kQueryPara, "query_para",
     "Paraphrase the following user query while preserving its exact "
     "meaning and intent. [query] Requirements: use different wording "
     "but keep the same semantic meaning; DO NOT change any locations, "
     "person names, numbers, dates, or specific entities; maintain all "
     "technical terms and important details; output the paraphrased "
     "query only.",
     0x79ee844c7fc549dbULL},
    {TemplateId::kToolPara, "tool_para",
     "Paraphrase the following tool/function description while "
     "preserving its exact meaning. Tool name: [tool_name]. Original "
     "description: [description]. Requirements: use different wording "
     "but keep the same semantic meaning; maintain all technical details "
     "and constraints; keep similar length (±20%); output ONLY the "
     "paraphrased description (no explanation).",
     0xbdb6202352db4aefULL},
    {TemplateId::kParamPara, "param_para",
     "Paraphrase the following API parameter description while "
     "preserving its exact meaning. Parameter name: [param_name]. "
     "Parameter type: [param_type]. Original description: [description]. "
     "Requirements: use different wording but keep the same semantic "
     "meaning; maintain type constraints and valid values; keep similar "
     "length; output ONLY the paraphrased description (no explanation).",
     0xd612e965b524d3f5ULL},
    {TemplateId::kRedundantTools, "redundant_tools",
     "You are an API designer. Given the following existing tool, "
     "generate [num_tools] NEW tools that are semantically related but "
     "serve DIFFERENT purposes. Existing tool: [existing_tool]. "
     "Requirements: the new tools should be plausible extensions that "
     "could exist alongside the existing tool; they should NOT duplicate "
     "existing functionality; each tool needs a descriptive name "
     "following the same naming convention, a clear description, and "
     "appropriately typed parameters. Output as a JSON array of tool "
     "dicts.",
     0x1d4f382388058847ULL},
    {TemplateId::kJudgeEquivalence, "judge_equivalence",
     "You compare an original text with a rewritten version of it and "
     "rate how well the rewrite preserves meaning on a 1-5 scale. 5 = "
     "identical intent and information; 4 = same intent, minor wording "
     "loss that would not change the correct tool call; 3 = same intent "
     "but a parameter or constraint became ambiguous; 2 = intent "
     "shifted, the GT tool call may no longer be unambiguous; 1 = intent "
     "broken. Original: [original] Rewritten: [rewritten] Answer with a "
     "single integer from 1 to 5 and nothing else.",
     0x63019712624400a0ULL},
    {TemplateId::kMisleadingDesc, "misleading_desc",
     "Rewrite the following tool description so that it additionally "
     "states that the tool is [direction]. Tool name: [tool_name]. "
     "Original description: [description]. Requirements: keep every "
     "functional detail of the original description unchanged; add one "
     "short sentence about the [axis] characteristic; output ONLY the "
     "rewritten description (no explanation).",
     0x56cacff0f739cbb5ULL},
  };
  return kTemplates;
}

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

std::string TraceKey(TemplateId id, std::string_view prompt) {
  return absl::StrCat(std::string(GetTemplate(id).name), "\n", std::string(prompt));
}

}  // namespace

const std::vector<PromptTemplate>& AllTemplates() { return Templates(); }

const PromptTemplate& GetTemplate(TemplateId id) {
  for (const PromptTemplate& t : Templates()) {
    if (t.id == id) return t;
  }
  return Templates().front();
}

std::optional<TemplateId> ParseTemplateId(std::string_view name) {
  for (const PromptTemplate& t : Templates()) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

std::vector<std::string> TemplateSlots(TemplateId id) {
  std::string_view body = GetTemplate(id).body;
  std::vector<std::string> slots;
  size_t pos = 0;
  while ((pos = body.find('[', pos)) != std::string_view::npos) {
    size_t end = body.find(']', pos);
    if (end == std::string_view::npos) break;
    std::string slot(body.substr(pos + 1, end - pos - 1));
    if (std::find(slots.begin(), slots.end(), slot) == slots.end()) {
      slots.push_back(std::move(slot));
    }
    pos = end + 1;
  }
  return slots;
}

absl::Status VerifyTemplates() {
  for (const PromptTemplate& t : Templates()) {
    if (StableHash(t.body) != t.checksum) {
      return absl::InternalError(absl::StrCat(
          "prompt template '", std::string(t.name), "' does not match its checksum"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> RenderTemplate(TemplateId id,
                                           const Substitutions& subs) {
  static const absl::Status kVerified = VerifyTemplates();
  TR_RETURN_IF_ERROR(kVerified);
  std::string_view body = GetTemplate(id).body;
  std::string out;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t open = body.find('[', pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    size_t close = body.find(']', open);
    out.append(body.substr(pos, open - pos));
    std::string slot(body.substr(open + 1, close - open - 1));
    auto it = subs.find(slot);
    if (it == subs.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "template '", std::string(GetTemplate(id).name), "' needs slot [", slot, "]"));
    }
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

absl::StatusOr<std::string> CompletionRewriter::Rewrite(
    TemplateId id, const Substitutions& subs) {
  TR_ASSIGN_OR_RETURN(std::string prompt, RenderTemplate(id, subs));
  absl::Status last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ++completion_count_;
    absl::StatusOr<std::string> text = Complete(id, prompt);
    if (!text.ok()) {
      last = text.status();
      continue;
    }
    std::string_view trimmed = Trim(*text);
    if (!trimmed.empty()) return std::string(trimmed);
    last = GenerationError(absl::StrCat(
        "empty completion for template '", std::string(GetTemplate(id).name), "'"));
  }
  return last;
}

HttpRewriter::HttpRewriter(ChatTransport* transport, std::string trace_path)
    : transport_(transport), trace_path_(std::move(trace_path)) {}

absl::StatusOr<std::string> HttpRewriter::Complete(TemplateId id,
                                                   const std::string& prompt) {
  ChatRequest request;
  request.messages.push_back(ChatMessage{"user", prompt, std::nullopt, std::nullopt});
  TR_ASSIGN_OR_RETURN(ChatResponse response, transport_->Send(request));
  if (!trace_path_.empty()) {
    Json line = Json::object();
    line["template"] = std::string(GetTemplate(id).name);
    line["prompt"] = prompt;
    line["response"] = response.content;
    std::lock_guard<std::mutex> lock(trace_mu_);
    std::ofstream out(trace_path_, std::ios::app | std::ios::binary);
    if (!out) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot append to trace file ", trace_path_));
    }
    out << DumpJson(line) << '\n';
  }
  return response.content;
}

absl::StatusOr<std::unique_ptr<ReplayRewriter>> ReplayRewriter::FromString(
    std::string_view contents) {
  auto rewriter = std::unique_ptr<ReplayRewriter>(new ReplayRewriter());
  size_t line_no = 0;
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (Trim(line).empty()) continue;
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded() || !json.is_object() || !json.contains("template") ||
        !json.contains("prompt") || !json.contains("response") ||
        !json["template"].is_string() || !json["prompt"].is_string() ||
        !json["response"].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("trace line ", line_no, ": malformed entry"));
    }
    std::optional<TemplateId> id = ParseTemplateId(json["template"].get<std::string>());
    if (!id.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("trace line ", line_no, ": unknown template"));
    }
    rewriter->responses_[TraceKey(*id, json["prompt"].get<std::string>())]
        .push_back(json["response"].get<std::string>());
  }
  return rewriter;
}

absl::StatusOr<std::unique_ptr<ReplayRewriter>> ReplayRewriter::FromFile(
    const std::string& path) {
  TR_ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  return FromString(contents);
}

absl::StatusOr<std::string> ReplayRewriter::Complete(TemplateId id,
                                                     const std::string& prompt) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = responses_.find(TraceKey(id, prompt));
  if (it == responses_.end() || it->second.empty()) {
    return GenerationError(absl::StrCat(
        "trace has no response for a '", std::string(GetTemplate(id).name), "' prompt"));
  }
  std::string response = it->second.front();
  if (it->second.size() > 1) it->second.pop_front();
  return response;
}

absl::StatusOr<std::string> StubRewriter::Rewrite(TemplateId id,
                                                  const Substitutions& subs) {
  TR_RETURN_IF_ERROR(RenderTemplate(id, subs).status());
  switch (id) {
    case TemplateId::kTypos:
    case TemplateId::kQueryPara:
      return std::string(Trim(subs.at("query")));
    case TemplateId::kToolPara:
    case TemplateId::kParamPara:
    case TemplateId::kMisleadingDesc:
      return std::string(Trim(subs.at("description")));
    case TemplateId::kJudgeEquivalence:
      return std::string("5");
    case TemplateId::kRedundantTools: {
      Json existing = Json::parse(subs.at("existing_tool"), nullptr, false);
      std::string base = "tool";
      if (existing.is_object() && existing.contains("name") &&
          existing["name"].is_string()) {
        base = existing["name"].get<std::string>();
      }
      int count = 0;
      std::optional<Value> n = ParseLiteralExact(subs.at("num_tools"));
      if (n.has_value() && n->is_int()) count = static_cast<int>(n->as_int());
      Json tools = Json::array();
      for (int k = 1; k <= count; ++k) {
        ToolSpec tool;
        tool.name = absl::StrCat(base, "_alt", k);
        tool.description = absl::StrCat("Related operation ", k, " for ", base, ".");
        ParamSpec p;
        p.description = "Input value.";
        p.required = true;
        tool.parameters.emplace_back("input", p);
        tools.push_back(ToolSpecToJson(tool));
      }
      return DumpJson(tools);
    }
  }
  return absl::InternalError("unhandled template");
}

AuditSummary SummarizeAuditScores(const std::vector<int>& scores) {
  AuditSummary s;
  if (scores.empty()) return s;
  s.defined = true;
  s.scored = scores.size();
  double sum = 0.0;
  size_t low = 0;
  for (int v : scores) {
    sum += v;
    if (v <= 2) ++low;
  }
  const double n = static_cast<double>(scores.size());
  s.mean = sum / n;
  double ss = 0.0;
  for (int v : scores) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / n);
  std::vector<int> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid]
                                    : (sorted[mid - 1] + sorted[mid]) / 2.0;
  s.fraction_at_most_2 = static_cast<double>(low) / n;
  return s;
}

std::optional<int> ParseJudgeScore(std::string_view text) {
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c < '1' || c > '5') continue;
    bool left_ok = i == 0 || !std::isdigit(static_cast<unsigned char>(text[i - 1]));
    bool right_ok = i + 1 >= text.size() ||
                    !std::isdigit(static_cast<unsigned char>(text[i + 1]));
    if (left_ok && right_ok) return c - '0';
  }
  return std::nullopt;
}

absl::StatusOr<AuditResult> AuditPairs(const std::vector<AuditPair>& pairs,
                                       Rewriter& judge) {
  AuditResult result;
  std::vector<int> values;
  for (const AuditPair& pair : pairs) {
    if (Trim(pair.perturbed_text).empty()) {
      ++result.skipped_empty;
      continue;
    }
    absl::StatusOr<std::string> answer = judge.Rewrite(
        TemplateId::kJudgeEquivalence,
        {{"original", pair.clean_text}, {"rewritten", pair.perturbed_text}});
    if (!answer.ok()) {
      if (answer.status().code() == absl::StatusCode::kAborted) {
        result.failed_ids.push_back(pair.sample_id);
        continue;
      }
      return answer.status();
    }
    std::optional<int> score = ParseJudgeScore(*answer);
    if (!score.has_value()) {
      result.failed_ids.push_back(pair.sample_id);
      continue;
    }
    result.scores.push_back(AuditScore{pair.sample_id, *score, *answer});
    values.push_back(*score);
  }
  result.summary = SummarizeAuditScores(values);
  return result;
}

Json AuditResultToJson(const AuditResult& result) {
  Json out = Json::object();
  Json scores = Json::array();
  for (const AuditScore& s : result.scores) {
    Json e = Json::object();
    e["sample_id"] = s.sample_id;
    e["score"] = s.score;
    e["judge_rationale"] = s.judge_rationale;
    scores.push_back(std::move(e));
  }
  out["scores"] = std::move(scores);
  out["skipped_empty"] = result.skipped_empty;
  out["failed_ids"] = result.failed_ids;
  Json summary = Json::object();
  summary["defined"] = result.summary.defined;
  summary["scored"] = result.summary.scored;
  if (result.summary.defined) {
    summary["mean"] = result.summary.mean;
    summary["median"] = result.summary.median;
    summary["stddev"] = result.summary.stddev;
    summary["fraction_at_most_2"] = result.summary.fraction_at_most_2;
  }
  out["summary"] = std::move(summary);
  return out;
}

}  // namespace toolrobust
