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


// Prompt templates and text-rewriting backends used by the generated
// perturbation types, plus the judge-driven paraphrase audit.
//
// Template bodies carry [bracketed] slots that are substituted verbatim.
// Bodies are checked against embedded FNV-1a checksums on first use.

#ifndef TOOLROBUST_REWRITER_H_
#define TOOLROBUST_REWRITER_H_

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/chat_client.h"
#include "toolrobust/status.h"

namespace toolrobust {

enum class TemplateId {
  kTypos,
  kQueryPara,
  kToolPara,
  kParamPara,
  kRedundantTools,
  kJudgeEquivalence,
  kMisleadingDesc,
};

struct PromptTemplate {
  TemplateId id;
  std::string_view name;
  std::string_view body;
  uint64_t checksum;
};

const std::vector<PromptTemplate>& AllTemplates();
const PromptTemplate& GetTemplate(TemplateId id);
std::optional<TemplateId> ParseTemplateId(std::string_view name);
// Slot names appearing in a template body, in order of first appearance.
std::vector<std::string> TemplateSlots(TemplateId id);
// Fails when any body no longer matches its embedded checksum.
absl::Status VerifyTemplates();

using Substitutions = std::map<std::string, std::string>;

// InvalidArgument when a slot has no substitution.
absl::StatusOr<std::string> RenderTemplate(TemplateId id,
                                           const Substitutions& subs);

class Rewriter {
 public:
  virtual ~Rewriter() = default;
  // Returns the rewritten text with surrounding whitespace stripped.
  virtual absl::StatusOr<std::string> Rewrite(TemplateId id,
                                              const Substitutions& subs) = 0;
};

// Renders the template and asks a completion backend, retrying exactly once
// on failure or empty output. Empty output after the retry is a generation
// error; transport errors are returned as-is.
class CompletionRewriter : public Rewriter {
 public:
  absl::StatusOr<std::string> Rewrite(TemplateId id,
                                      const Substitutions& subs) final;
  int64_t completion_count() const { return completion_count_; }

 protected:
  virtual absl::StatusOr<std::string> Complete(TemplateId id,
                                               const std::string& prompt) = 0;

 private:
  std::atomic<int64_t> completion_count_{0};
};

// Sends each prompt as a single user message. When `trace_path` is set,
// every (template, prompt, response) triple is appended to it as JSONL.
class HttpRewriter : public CompletionRewriter {
 public:
  explicit HttpRewriter(ChatTransport* transport, std::string trace_path = "");

 protected:
  absl::StatusOr<std::string> Complete(TemplateId id,
                                       const std::string& prompt) override;

 private:
  ChatTransport* transport_;
  std::string trace_path_;
  std::mutex trace_mu_;
};

// Serves responses recorded by HttpRewriter. Repeated prompts replay their
// responses in order; the last one is reused once exhausted.
class ReplayRewriter : public CompletionRewriter {
 public:
  static absl::StatusOr<std::unique_ptr<ReplayRewriter>> FromFile(
      const std::string& path);
  static absl::StatusOr<std::unique_ptr<ReplayRewriter>> FromString(
      std::string_view contents);

 protected:
  absl::StatusOr<std::string> Complete(TemplateId id,
                                       const std::string& prompt) override;

 private:
  std::map<std::string, std::deque<std::string>> responses_;
  std::mutex mu_;
};

// Test double driven by a callback.
class ScriptedRewriter : public CompletionRewriter {
 public:
  using Script =
      std::function<absl::StatusOr<std::string>(TemplateId, const std::string&)>;
  explicit ScriptedRewriter(Script script) : script_(std::move(script)) {}

 protected:
  absl::StatusOr<std::string> Complete(TemplateId id,
                                       const std::string& prompt) override {
    return script_(id, prompt);
  }

 private:
  Script script_;
};

// Offline identity backend: text templates echo their input, redundant_tools
// returns `<existing>_alt<k>` tools, the judge answers "5".
class StubRewriter : public Rewriter {
 public:
  absl::StatusOr<std::string> Rewrite(TemplateId id,
                                      const Substitutions& subs) override;
};

struct AuditPair {
  std::string clean_text;
  std::string perturbed_text;
  std::string sample_id;
};

struct AuditScore {
  std::string sample_id;
  int score = 0;
  std::string judge_rationale;
};

struct AuditSummary {
  // False when no pair was scored.
  bool defined = false;
  size_t scored = 0;
  double mean = 0.0;
  double median = 0.0;
  // Population standard deviation.
  double stddev = 0.0;
  double fraction_at_most_2 = 0.0;
};

struct AuditResult {
  std::vector<AuditScore> scores;
  size_t skipped_empty = 0;
  std::vector<std::string> failed_ids;
  AuditSummary summary;
};

AuditSummary SummarizeAuditScores(const std::vector<int>& scores);
// First standalone digit 1-5 in the judge's answer.
std::optional<int> ParseJudgeScore(std::string_view text);

// Pairs with empty perturbed text are skipped and counted; unparseable or
// empty judge answers are recorded as failures. Transport errors abort.
absl::StatusOr<AuditResult> AuditPairs(const std::vector<AuditPair>& pairs,
                                       Rewriter& judge);

Json AuditResultToJson(const AuditResult& result);

}  // namespace toolrobust

#endif  // TOOLROBUST_REWRITER_H_
