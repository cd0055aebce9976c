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


#include "toolrobust/perturb.h"

#include <algorithm>
#include <filesystem>
#include <optional>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "toolrobust/parallel.h"
#include "toolrobust/parser.h"
#include "toolrobust/rng.h"
#include "toolrobust/typos.h"

namespace toolrobust {
namespace {

std::string AppendSentence(std::string_view text, std::string_view sentence) {
  if (text.empty()) return std::string(sentence);
  if (absl::ascii_isspace(static_cast<unsigned char>(text.back()))) {
    return absl::StrCat(std::string(text), std::string(sentence));
  }
  return absl::StrCat(std::string(text), " ", std::string(sentence));
}

bool HasToolNamed(const std::vector<ToolSpec>& tools, std::string_view name) {
  return std::any_of(tools.begin(), tools.end(),
                     [&](const ToolSpec& t) { return t.name == name; });
}

absl::StatusOr<Sample> WithDescriptor(Sample sample, std::string_view code,
                                      uint64_t seed, std::string notes = "") {
  TR_ASSIGN_OR_RETURN(PerturbationDescriptor d, MakeDescriptor(code, seed));
  d.notes = std::move(notes);
  sample.perturbation = std::move(d);
  return sample;
}

absl::StatusOr<size_t> FinalUserTurn(const Sample& sample) {
  std::optional<size_t> idx = sample.FinalUserTurnIndex();
  if (!idx.has_value()) return NotApplicableError("sample has no user turn");
  return *idx;
}

// Tools decoded from a rewriter answer, plus how many entries were unusable.
struct ToolArray {
  std::vector<ToolSpec> tools;
  int invalid = 0;
};

std::optional<ToolArray> ParseToolArray(std::string_view raw) {
  std::string text = StripCodeFences(raw);
  size_t open = text.find('[');
  size_t close = text.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    return std::nullopt;
  }
  Json json = Json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (json.is_discarded() || !json.is_array()) return std::nullopt;
  ToolArray out;
  for (const Json& element : json) {
    absl::StatusOr<ToolSpec> tool = ToolSpecFromJson(element);
    if (tool.ok()) {
      out.tools.push_back(*std::move(tool));
    } else {
      ++out.invalid;
    }
  }
  if (out.tools.empty() && out.invalid > 0) return std::nullopt;
  return out;
}

absl::StatusOr<ToolArray> RequestTools(Rewriter& rewriter,
                                       const std::string& existing, int n) {
  Substitutions subs = {{"existing_tool", existing},
                        {"num_tools", absl::StrCat(n)}};
  std::string last_raw;
  for (int attempt = 0; attempt < 2; ++attempt) {
    TR_ASSIGN_OR_RETURN(std::string raw,
                        rewriter.Rewrite(TemplateId::kRedundantTools, subs));
    std::optional<ToolArray> parsed = ParseToolArray(raw);
    if (parsed.has_value()) return *std::move(parsed);
    last_raw = std::move(raw);
  }
  return GenerationError(
      absl::StrCat("redundant_tools output is not a tool array: ", last_raw));
}

std::vector<std::string> ProtectedNames(const Sample& sample) {
  std::vector<std::string> names;
  for (const ToolSpec& tool : sample.tools) {
    names.push_back(tool.name);
    for (const auto& [param, spec] : tool.parameters) names.push_back(param);
  }
  return names;
}

bool IsObservationCode(std::string_view code) {
  const PerturbationType* t = FindPerturbationType(code);
  return t != nullptr && t->component == Component::kObservation;
}

bool IsRewardCode(std::string_view code) {
  const PerturbationType* t = FindPerturbationType(code);
  return t != nullptr && t->component == Component::kReward;
}

void Tally(std::map<std::string, std::map<std::string, int64_t>>& table,
           Source source, const std::string& code) {
  ++table[SourceName(source)][code];
}

absl::Status RequireRewriterFor(const std::vector<std::string>& codes,
                                const PerturbConfig& config,
                                const Rewriter* rewriter) {
  if (rewriter != nullptr) return absl::OkStatus();
  for (const std::string& code : codes) {
    if (NeedsRewriter(code, config)) {
      return absl::InvalidArgumentError(
          absl::StrCat("type '", code, "' needs a rewriter"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidatePerturbConfig(const PerturbConfig& config) {
  if (config.abbreviation_keep < 1) {
    return absl::InvalidArgumentError("abbreviation_keep must be positive");
  }
  if (config.abbreviation_keep >= config.abbreviation_min_len) {
    return absl::InvalidArgumentError(
        "abbreviation_keep must be smaller than abbreviation_min_len");
  }
  if (config.hint_phrase_pool_cost.empty() ||
      config.hint_phrase_pool_speed.empty()) {
    return absl::InvalidArgumentError("hint phrase pools must be non-empty");
  }
  if (config.redundant_count < 0) {
    return absl::InvalidArgumentError("redundant_count must be non-negative");
  }
  if (config.threads < 1) {
    return absl::InvalidArgumentError("threads must be positive");
  }
  return absl::OkStatus();
}

std::string AbbreviateName(std::string_view name, int min_len, int keep) {
  std::string out;
  bool done = false;
  size_t start = 0;
  while (start <= name.size()) {
    size_t end = name.find_first_of("._", start);
    if (end == std::string_view::npos) end = name.size();
    std::string_view segment = name.substr(start, end - start);
    if (!done && segment.size() >= static_cast<size_t>(min_len)) {
      out.append(segment.substr(0, static_cast<size_t>(keep)));
      done = true;
    } else {
      out.append(segment);
    }
    if (end == name.size()) break;
    out.push_back(name[end]);
    start = end + 1;
  }
  if (!done) out.push_back('2');
  return out;
}

absl::StatusOr<size_t> SingleGoldenToolIndex(const Sample& sample) {
  if (sample.golden_answers.empty()) {
    return NotApplicableError("sample has no golden answer");
  }
  const std::string& name = sample.golden_answers.front().name;
  for (const ToolCall& call : sample.golden_answers) {
    if (call.name != name) {
      return NotApplicableError("golden answers name more than one tool");
    }
  }
  std::vector<size_t> idx = sample.ToolIndices(name);
  if (idx.size() != 1) {
    return NotApplicableError(
        absl::StrCat("golden tool '", name, "' does not resolve to one tool"));
  }
  return idx.front();
}

std::vector<std::pair<std::string, ParamSpec>> WrongParameters(
    const ToolSpec& tool) {
  std::vector<std::pair<std::string, ParamSpec>> params = tool.parameters;
  if (params.empty()) {
    params.emplace_back("input_arg", ParamSpec{});
  } else if (params.size() == 1) {
    params.front().first += "_arg";
  } else {
    std::string first = params.front().first;
    for (size_t i = 0; i + 1 < params.size(); ++i) {
      params[i].first = tool.parameters[i + 1].first;
    }
    params.back().first = first;
  }
  return params;
}

absl::StatusOr<Sample> ApplySameName(const Sample& sample, char variant,
                                     uint64_t seed) {
  if (variant < 'A' || variant > 'E') {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown same_name variant '", std::string(1, variant), "'"));
  }
  std::string code = absl::StrCat("same_name_", std::string(1, variant));
  TR_ASSIGN_OR_RETURN(size_t gt, SingleGoldenToolIndex(sample));
  Rng rng = SampleRng(seed, sample.id, code);
  const ToolSpec& gt_tool = sample.tools[gt];
  ToolSpec dup;
  dup.name = gt_tool.name;
  std::string notes;
  if (variant == 'B' || variant == 'D') dup.description = gt_tool.description;
  if (variant == 'C' || variant == 'D' || variant == 'E') {
    dup.parameters = WrongParameters(gt_tool);
  }
  if (variant == 'E') {
    std::vector<const ToolSpec*> others;
    for (const ToolSpec& t : sample.tools) {
      if (t.name == gt_tool.name) continue;
      bool seen = std::any_of(others.begin(), others.end(),
                              [&](const ToolSpec* o) { return o->name == t.name; });
      if (!seen) others.push_back(&t);
    }
    if (others.size() >= 2) {
      dup.description = others[rng.Uniform(others.size())]->description;
    } else {
      notes = "fewer than two other tools; description left empty";
    }
  }
  Sample out = sample;
  size_t at = rng.Uniform(out.tools.size() + 1);
  out.tools.insert(out.tools.begin() + static_cast<long>(at), std::move(dup));
  return WithDescriptor(std::move(out), code, seed, std::move(notes));
}

absl::StatusOr<Sample> ApplyRedundant(const Sample& sample, Rewriter& rewriter,
                                      int count, uint64_t seed) {
  if (count < 0) return absl::InvalidArgumentError("count must be non-negative");
  TR_ASSIGN_OR_RETURN(size_t gt, SingleGoldenToolIndex(sample));
  Sample out = sample;
  if (count == 0) return WithDescriptor(std::move(out), "redundant", seed);
  std::string existing = DumpJson(ToolSpecToJson(sample.tools[gt]));
  int added = 0;
  int dropped = 0;
  auto absorb = [&](const ToolArray& batch, int wanted) {
    int taken = 0;
    dropped += batch.invalid;
    for (const ToolSpec& tool : batch.tools) {
      if (taken == wanted) break;
      if (HasToolNamed(out.tools, tool.name)) {
        ++dropped;
        continue;
      }
      out.tools.push_back(tool);
      ++taken;
    }
    return taken;
  };
  TR_ASSIGN_OR_RETURN(ToolArray first, RequestTools(rewriter, existing, count));
  added += absorb(first, count);
  if (added < count) {
    TR_ASSIGN_OR_RETURN(ToolArray second,
                        RequestTools(rewriter, existing, count - added));
    added += absorb(second, count - added);
  }
  std::string notes;
  if (added < count) {
    notes = absl::StrCat("added ", added, " of ", count, " tools; dropped ",
                         dropped, " colliding or invalid entries");
  }
  return WithDescriptor(std::move(out), "redundant", seed, std::move(notes));
}

absl::StatusOr<Sample> ApplyReward(const Sample& sample,
                                   std::string_view variant,
                                   const PerturbConfig& config,
                                   Rewriter* rewriter, uint64_t seed) {
  if (!IsRewardCode(variant)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown reward variant '", std::string(variant), "'"));
  }
  TR_ASSIGN_OR_RETURN(size_t gt, SingleGoldenToolIndex(sample));
  TR_ASSIGN_OR_RETURN(size_t turn, FinalUserTurn(sample));
  bool cost = variant.substr(0, 2) == "CD";
  bool neutral = variant.ends_with("_NT");
  bool abbreviated = variant.ends_with("_AB");
  Rng rng = SampleRng(seed, sample.id, variant);

  Sample out = sample;
  ToolSpec& gt_tool = out.tools[gt];
  const std::string original_name = gt_tool.name;
  const std::string original_desc = gt_tool.description;
  ToolSpec distractor = gt_tool;
  if (abbreviated) {
    std::string renamed = AbbreviateName(original_name,
                                         config.abbreviation_min_len,
                                         config.abbreviation_keep);
    while (HasToolNamed(out.tools, renamed)) renamed.push_back('2');
    gt_tool.name = renamed;
    for (ToolCall& call : out.golden_answers) call.name = renamed;
    distractor.name = original_name;
  } else {
    std::string suffix = neutral ? "_1" : (cost ? "_Budget" : "_Fast");
    distractor.name = original_name + suffix;
    while (HasToolNamed(out.tools, distractor.name)) {
      distractor.name.push_back('2');
    }
  }

  std::string notes;
  if (config.rewrite_reward_descriptions && rewriter != nullptr) {
    std::string axis = cost ? "cost" : "latency";
    TR_ASSIGN_OR_RETURN(
        gt_tool.description,
        rewriter->Rewrite(
            TemplateId::kMisleadingDesc,
            {{"direction", cost ? "expensive to call" : "slow to respond"},
             {"tool_name", gt_tool.name},
             {"description", original_desc},
             {"axis", axis}}));
    TR_ASSIGN_OR_RETURN(
        distractor.description,
        rewriter->Rewrite(
            TemplateId::kMisleadingDesc,
            {{"direction",
              cost ? "low-cost" : "fast, responding in under 1s"},
             {"tool_name", distractor.name},
             {"description", original_desc},
             {"axis", axis}}));
    notes = "descriptions: rewriter";
  } else {
    gt_tool.description = AppendSentence(
        original_desc, cost ? kCostPenaltySentence : kSpeedPenaltySentence);
    distractor.description = AppendSentence(
        original_desc, cost ? kCostFavourSentence : kSpeedFavourSentence);
    notes = "descriptions: template";
  }

  const std::vector<std::string>& pool =
      cost ? config.hint_phrase_pool_cost : config.hint_phrase_pool_speed;
  const std::string& hint = pool[rng.Uniform(pool.size())];
  out.dialog[turn].content = AppendSentence(out.dialog[turn].content, hint);

  out.tools.push_back(std::move(distractor));
  rng.Shuffle(out.tools);
  return WithDescriptor(std::move(out), variant, seed, std::move(notes));
}

absl::StatusOr<Sample> ApplyObservation(const Sample& sample,
                                        std::string_view type_code,
                                        const PerturbConfig& config,
                                        Rewriter* rewriter, uint64_t seed) {
  if (!IsObservationCode(type_code)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown observation type '", std::string(type_code), "'"));
  }
  if (NeedsRewriter(type_code, config) && rewriter == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("type '", std::string(type_code), "' needs a rewriter"));
  }
  Sample out = sample;
  std::string notes;
  if (type_code == "realistic_typos" || type_code == "query_paraphrase") {
    TR_ASSIGN_OR_RETURN(size_t turn, FinalUserTurn(sample));
    std::string& query = out.dialog[turn].content;
    if (type_code == "realistic_typos" && config.offline_typos) {
      Rng rng = SampleRng(seed, sample.id, type_code);
      std::optional<std::string> noisy =
          AddOfflineTypos(query, ProtectedNames(sample), rng);
      if (noisy.has_value()) {
        query = *std::move(noisy);
        notes = "offline typos";
      } else {
        notes = "offline typos: no eligible words";
      }
    } else {
      TemplateId id = type_code == "realistic_typos" ? TemplateId::kTypos
                                                     : TemplateId::kQueryPara;
      TR_ASSIGN_OR_RETURN(query, rewriter->Rewrite(id, {{"query", query}}));
    }
  } else if (type_code == "paraphrase_tool_description") {
    int rewritten = 0;
    for (ToolSpec& tool : out.tools) {
      if (tool.description.empty()) continue;
      TR_ASSIGN_OR_RETURN(
          tool.description,
          rewriter->Rewrite(TemplateId::kToolPara,
                            {{"tool_name", tool.name},
                             {"description", tool.description}}));
      ++rewritten;
    }
    if (rewritten == 0) return NotApplicableError("no tool descriptions");
  } else {
    int rewritten = 0;
    for (ToolSpec& tool : out.tools) {
      for (auto& [name, spec] : tool.parameters) {
        if (spec.description.empty()) continue;
        TR_ASSIGN_OR_RETURN(
            spec.description,
            rewriter->Rewrite(TemplateId::kParamPara,
                              {{"param_name", name},
                               {"param_type", spec.type_tag},
                               {"description", spec.description}}));
        ++rewritten;
      }
    }
    if (rewritten == 0) return NotApplicableError("no parameter descriptions");
  }
  return WithDescriptor(std::move(out), type_code, seed, std::move(notes));
}

absl::StatusOr<Sample> TagTransition(const Sample& sample,
                                     std::string_view type_code,
                                     uint64_t seed) {
  if (!IsTransitionType(type_code)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown transition type '", std::string(type_code), "'"));
  }
  return WithDescriptor(sample, type_code, seed);
}

absl::StatusOr<Sample> ApplyPerturbation(const Sample& sample,
                                         std::string_view type_code,
                                         const PerturbConfig& config,
                                         Rewriter* rewriter) {
  const PerturbationType* type = FindPerturbationType(type_code);
  if (type == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown type code '", std::string(type_code), "'"));
  }
  uint64_t seed = config.seed;
  switch (type->component) {
    case Component::kObservation:
      return ApplyObservation(sample, type_code, config, rewriter, seed);
    case Component::kReward:
      return ApplyReward(sample, type_code, config, rewriter, seed);
    case Component::kTransition:
      return TagTransition(sample, type_code, seed);
    case Component::kAction:
      if (type_code == "redundant") {
        if (rewriter == nullptr) {
          return absl::InvalidArgumentError("type 'redundant' needs a rewriter");
        }
        return ApplyRedundant(sample, *rewriter, config.redundant_count, seed);
      }
      return ApplySameName(sample, type_code.back(), seed);
    case Component::kNone:
      break;
  }
  return absl::InternalError("unhandled component");
}

bool NeedsRewriter(std::string_view type_code, const PerturbConfig& config) {
  const PerturbationType* type = FindPerturbationType(type_code);
  if (type == nullptr || type->method != Method::kLlm) return false;
  return !(type_code == "realistic_typos" && config.offline_typos);
}

absl::StatusOr<std::vector<std::string>> ResolveTypeSelector(
    std::string_view selector) {
  std::set<std::string> chosen;
  bool any = false;
  std::string text(selector);
  for (absl::string_view raw : absl::StrSplit(text, ',')) {
    std::string token(absl::StripAsciiWhitespace(raw));
    if (token.empty()) continue;
    any = true;
    if (token == "all") {
      for (const PerturbationType& t : AllPerturbationTypes()) {
        chosen.insert(std::string(t.code));
      }
    } else if (token == "all-static") {
      for (const std::string& c : StaticTypeCodes()) chosen.insert(c);
    } else if (std::optional<Component> c = ParseComponent(token);
               c.has_value() && *c != Component::kNone) {
      for (const std::string& code : TypeCodesFor(*c)) chosen.insert(code);
    } else if (const PerturbationType* t = FindPerturbationType(token)) {
      chosen.insert(std::string(t->code));
    } else if (const PerturbationType* d =
                   FindPerturbationTypeByDisplayName(token)) {
      chosen.insert(std::string(d->code));
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown type selector '", token, "'"));
    }
  }
  if (!any) return absl::InvalidArgumentError("empty type selector");
  std::vector<std::string> out;
  for (const PerturbationType& t : AllPerturbationTypes()) {
    if (chosen.count(std::string(t.code)) > 0) out.emplace_back(t.code);
  }
  return out;
}

bool SuitePlan::Skips(Source source, std::string_view type_code) const {
  auto it = skip.find(source);
  return it != skip.end() && it->second.count(std::string(type_code)) > 0;
}

std::map<Source, std::set<std::string>> DefaultSkipTable() {
  std::map<Source, std::set<std::string>> table;
  for (const std::string& code : TypeCodesFor(Component::kAction)) {
    table[Source::kToolEyes].insert(code);
  }
  for (const std::string& code : TypeCodesFor(Component::kReward)) {
    table[Source::kToolEyes].insert(code);
  }
  return table;
}

SuitePlan MakeSuitePlan(std::vector<std::string> types) {
  return SuitePlan{std::move(types), DefaultSkipTable()};
}

absl::Status ValidateSuitePlan(const SuitePlan& plan) {
  std::set<std::string> seen;
  for (const std::string& code : plan.types) {
    if (FindPerturbationType(code) == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown type code '", code, "'"));
    }
    if (!seen.insert(code).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("type code '", code, "' listed twice"));
    }
  }
  for (const auto& [source, codes] : plan.skip) {
    for (const std::string& code : codes) {
      if (FindPerturbationType(code) == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat("skip table names unknown type code '", code, "'"));
      }
    }
  }
  return absl::OkStatus();
}

int64_t SkipReport::TotalByTable() const {
  int64_t total = 0;
  for (const auto& [source, counts] : by_table) {
    for (const auto& [code, n] : counts) total += n;
  }
  return total;
}

int64_t SkipReport::TotalNotApplicable() const {
  int64_t total = 0;
  for (const auto& [source, counts] : not_applicable) {
    for (const auto& [code, n] : counts) total += n;
  }
  return total;
}

Json SkipReportToJson(const SkipReport& report) {
  Json out = Json::object();
  out["total_by_table"] = report.TotalByTable();
  out["total_not_applicable"] = report.TotalNotApplicable();
  out["by_table"] = Json::object();
  for (const auto& [source, counts] : report.by_table) {
    for (const auto& [code, n] : counts) out["by_table"][source][code] = n;
  }
  out["not_applicable"] = Json::object();
  for (const auto& [source, counts] : report.not_applicable) {
    for (const auto& [code, n] : counts) {
      out["not_applicable"][source][code] = n;
    }
  }
  out["entries"] = Json::array();
  for (const SkipEntry& e : report.entries) {
    Json entry = Json::object();
    entry["sample_id"] = e.sample_id;
    entry["source"] = SourceName(e.source);
    entry["type"] = e.type_code;
    entry["reason"] = e.reason;
    out["entries"].push_back(std::move(entry));
  }
  return out;
}

int64_t Suite::TotalPerturbed() const {
  int64_t total = 0;
  for (const auto& [code, list] : samples) {
    total += static_cast<int64_t>(list.size());
  }
  return total;
}

absl::StatusOr<Suite> GenerateSuite(const std::vector<Sample>& clean,
                                    const SuitePlan& plan,
                                    const PerturbConfig& config,
                                    Rewriter* rewriter) {
  TR_RETURN_IF_ERROR(ValidatePerturbConfig(config));
  TR_RETURN_IF_ERROR(ValidateSuitePlan(plan));
  TR_RETURN_IF_ERROR(RequireRewriterFor(plan.types, config, rewriter));

  Suite suite;
  suite.types = plan.types;
  struct Job {
    size_t type;
    size_t sample;
  };
  std::vector<Job> jobs;
  for (size_t t = 0; t < plan.types.size(); ++t) {
    suite.samples[plan.types[t]];
    for (size_t s = 0; s < clean.size(); ++s) {
      if (plan.Skips(clean[s].source, plan.types[t])) {
        Tally(suite.skips.by_table, clean[s].source, plan.types[t]);
      } else {
        jobs.push_back({t, s});
      }
    }
  }

  std::vector<std::optional<absl::StatusOr<Sample>>> results(jobs.size());
  ParallelFor(jobs.size(), config.threads, [&](size_t i) {
    absl::StatusOr<Sample> r = ApplyPerturbation(
        clean[jobs[i].sample], plan.types[jobs[i].type], config, rewriter);
    bool keep_going = r.ok() || IsNotApplicable(r.status());
    results[i] = std::move(r);
    return keep_going;
  });

  for (size_t i = 0; i < jobs.size(); ++i) {
    const std::string& code = plan.types[jobs[i].type];
    const Sample& source = clean[jobs[i].sample];
    if (!results[i].has_value()) continue;
    absl::StatusOr<Sample>& r = *results[i];
    if (r.ok()) {
      suite.samples[code].push_back(*std::move(r));
    } else if (IsNotApplicable(r.status())) {
      Tally(suite.skips.not_applicable, source.source, code);
      suite.skips.entries.push_back({source.id, source.source, code,
                                     std::string(r.status().message())});
    } else {
      return absl::Status(
          r.status().code(),
          absl::StrCat("sample '", source.id, "', type '", code,
                       "': ", r.status().message()));
    }
  }
  return suite;
}

absl::StatusOr<std::vector<std::string>> WriteSuite(
    const std::string& dir, const Suite& suite,
    const std::vector<Sample>& clean) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create '", dir, "': ", ec.message()));
  }
  std::vector<std::string> written;
  for (const std::string& code : suite.types) {
    std::string path = (std::filesystem::path(dir) / (code + ".jsonl")).string();
    auto it = suite.samples.find(code);
    static const std::vector<Sample> kNone;
    TR_RETURN_IF_ERROR(
        SaveSamples(it == suite.samples.end() ? kNone : it->second, path));
    written.push_back(path);
  }
  std::string clean_path = (std::filesystem::path(dir) / "clean.jsonl").string();
  TR_RETURN_IF_ERROR(SaveSamples(clean, clean_path));
  written.push_back(clean_path);
  std::string report_path =
      (std::filesystem::path(dir) / "skip_report.json").string();
  TR_RETURN_IF_ERROR(WriteFileAtomically(
      report_path, SkipReportToJson(suite.skips).dump(2) + "\n"));
  written.push_back(report_path);
  return written;
}

const std::string& ComposeModeName(ComposeMode mode) {
  static const std::string kNames[] = {"full", "mixed"};
  return kNames[static_cast<int>(mode)];
}

std::optional<ComposeMode> ParseComposeMode(std::string_view name) {
  for (ComposeMode m : {ComposeMode::kFull, ComposeMode::kMixed}) {
    if (absl::EqualsIgnoreCase(ComposeModeName(m), std::string(name))) return m;
  }
  return std::nullopt;
}

size_t ValidationSize(size_t n) { return std::max<size_t>(1, n * 2 / 100); }

size_t MixedCleanTarget(size_t n) {
  if (n == 4000) return 2006;
  return (n + 1) / 2;
}

absl::StatusOr<TrainingSet> ComposeTrainingSet(const std::vector<Sample>& clean,
                                               ComposeMode mode,
                                               const PerturbConfig& config,
                                               Rewriter* rewriter) {
  const size_t n = clean.size();
  if (n < 2) {
    return absl::InvalidArgumentError("training composition needs >= 2 samples");
  }
  TR_RETURN_IF_ERROR(ValidatePerturbConfig(config));
  const std::vector<std::string> codes = StaticTypeCodes();
  TR_RETURN_IF_ERROR(RequireRewriterFor(codes, config, rewriter));

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng(HashCombine(config.seed, StableHash("compose/split"))).Shuffle(order);
  const size_t val_n = ValidationSize(n);
  const size_t train_n = n - val_n;

  // Row plan: which clean sample, and the first type to try (or none).
  struct Row {
    size_t sample;
    bool val;
    std::optional<size_t> code;
  };
  std::vector<Row> rows;
  size_t val_start = Rng(HashCombine(config.seed, StableHash("compose/val")))
                         .Uniform(codes.size());
  size_t train_start =
      Rng(HashCombine(config.seed, StableHash("compose/train")))
          .Uniform(codes.size());
  std::vector<bool> keep_clean(train_n, false);
  if (mode == ComposeMode::kMixed) {
    size_t target = std::min(MixedCleanTarget(n), train_n);
    std::vector<size_t> picks(train_n);
    for (size_t i = 0; i < train_n; ++i) picks[i] = i;
    Rng(HashCombine(config.seed, StableHash("compose/mixed"))).Shuffle(picks);
    for (size_t i = 0; i < target; ++i) keep_clean[picks[i]] = true;
  }
  size_t cycle = 0;
  for (size_t i = 0; i < train_n; ++i) {
    if (keep_clean[i]) {
      rows.push_back({order[i], false, std::nullopt});
    } else {
      rows.push_back({order[i], false, (train_start + cycle++) % codes.size()});
    }
  }
  for (size_t j = 0; j < val_n; ++j) {
    rows.push_back({order[train_n + j], true, (val_start + j) % codes.size()});
  }

  std::vector<std::optional<absl::StatusOr<Sample>>> results(rows.size());
  ParallelFor(rows.size(), config.threads, [&](size_t i) {
    const Row& row = rows[i];
    const Sample& sample = clean[row.sample];
    if (!row.code.has_value()) {
      results[i] = sample;
      return true;
    }
    absl::StatusOr<Sample> r = NotApplicableError("no static type applies");
    for (size_t k = 0; k < codes.size(); ++k) {
      const std::string& code = codes[(*row.code + k) % codes.size()];
      r = ApplyPerturbation(sample, code, config, rewriter);
      if (r.ok() || !IsNotApplicable(r.status())) break;
    }
    bool keep_going = r.ok() || IsNotApplicable(r.status());
    results[i] = std::move(r);
    return keep_going;
  });

  TrainingSet set;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Sample& source = clean[rows[i].sample];
    if (!results[i].has_value()) continue;
    absl::StatusOr<Sample>& r = *results[i];
    if (!r.ok()) {
      if (!IsNotApplicable(r.status())) {
        return absl::Status(r.status().code(),
                            absl::StrCat("sample '", source.id,
                                         "': ", r.status().message()));
      }
      Tally(set.skips.not_applicable, source.source, "any");
      set.skips.entries.push_back({source.id, source.source, "any",
                                   std::string(r.status().message())});
      continue;
    }
    if (rows[i].code.has_value()) {
      ++set.perturbed_rows;
      if (!rows[i].val) ++set.type_counts[std::string(r->TypeCode())];
    } else {
      ++set.clean_rows;
    }
    (rows[i].val ? set.val : set.train).push_back(*std::move(r));
  }
  return set;
}

Json TrainingSetSummaryToJson(const TrainingSet& set, ComposeMode mode) {
  Json out = Json::object();
  out["mode"] = ComposeModeName(mode);
  out["train"] = set.train.size();
  out["val"] = set.val.size();
  out["clean_rows"] = set.clean_rows;
  out["perturbed_rows"] = set.perturbed_rows;
  out["train_type_counts"] = Json::object();
  for (const auto& [code, n] : set.type_counts) {
    out["train_type_counts"][code] = n;
  }
  out["skips"] = SkipReportToJson(set.skips);
  return out;
}

}  // namespace toolrobust
