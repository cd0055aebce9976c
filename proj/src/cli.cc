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


#include "toolrobust/cli.h"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "toolrobust/corpus.h"
#include "toolrobust/manifest.h"
#include "toolrobust/parser.h"
#include "toolrobust/record.h"
#include "toolrobust/rewriter.h"
#include "toolrobust/runner.h"
#include "toolrobust/scoring.h"
#include "toolrobust/stats.h"

namespace toolrobust {
namespace {

namespace fs = std::filesystem;

const std::set<std::string>& PerturbKeys() {
  static const std::set<std::string> kKeys = {
      "hint_phrase_pool_cost", "hint_phrase_pool_speed",
      "abbreviation_min_len",  "abbreviation_keep",
      "redundant_count",       "offline_typos",
      "rewrite_reward_descriptions", "threads"};
  return kKeys;
}

const std::set<std::string>& EndpointKeys() {
  static const std::set<std::string> kKeys = {
      "endpoint",        "model",           "temperature",
      "max_tokens",      "disable_thinking", "max_retries",
      "backoff_initial", "backoff_max",     "request_timeout",
      "concurrency_limit", "rate_limit",    "mode"};
  return kKeys;
}

absl::StatusOr<int> IntValue(const std::string& key, const std::string& v) {
  int out = 0;
  if (!absl::SimpleAtoi(v, &out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config '", key, "': '", v, "' is not an integer"));
  }
  return out;
}

absl::StatusOr<double> RealValue(const std::string& key, const std::string& v) {
  double out = 0;
  if (!absl::SimpleAtod(v, &out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config '", key, "': '", v, "' is not a number"));
  }
  return out;
}

absl::StatusOr<bool> BoolValue(const std::string& key, const std::string& v) {
  bool out = false;
  if (!absl::SimpleAtob(v, &out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config '", key, "': '", v, "' is not a boolean"));
  }
  return out;
}

std::vector<std::string> PhraseList(const std::string& v) {
  std::vector<std::string> out;
  for (absl::string_view part : absl::StrSplit(v, '|')) {
    std::string s(absl::StripAsciiWhitespace(part));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

// Shared flags for commands that may need a text generator.
struct RewriterFlags {
  std::string kind = "none";
  std::string trace;
  std::string replay;
};

void AddRewriterFlags(CLI::App* cmd, RewriterFlags* flags,
                      const std::string& name = "--rewriter") {
  cmd->add_option(name, flags->kind, "Text generator: none, stub, endpoint or replay")
      ->check(CLI::IsMember({"none", "stub", "endpoint", "replay"}));
  cmd->add_option("--trace", flags->trace,
                  "Append endpoint prompts and responses to this JSONL file");
  cmd->add_option("--replay-file", flags->replay,
                  "Trace file served by the replay generator");
}

struct RewriterHandle {
  std::unique_ptr<ChatClient> client;
  std::unique_ptr<Rewriter> rewriter;
};

absl::StatusOr<RewriterHandle> MakeRewriter(const RewriterFlags& flags,
                                            const ConfigMap& config) {
  RewriterHandle h;
  if (flags.kind == "none") return h;
  if (flags.kind == "stub") {
    h.rewriter = std::make_unique<StubRewriter>();
    return h;
  }
  if (flags.kind == "replay") {
    if (flags.replay.empty()) {
      return absl::InvalidArgumentError("--rewriter replay needs --replay-file");
    }
    TR_ASSIGN_OR_RETURN(std::unique_ptr<ReplayRewriter> r,
                        ReplayRewriter::FromFile(flags.replay));
    h.rewriter = std::move(r);
    return h;
  }
  EndpointConfig endpoint;
  TR_RETURN_IF_ERROR(ApplyEndpointConfig(config, &endpoint));
  TR_RETURN_IF_ERROR(ApplyEndpointEnvironment(&endpoint));
  TR_RETURN_IF_ERROR(ValidateEndpointConfig(endpoint));
  h.client = std::make_unique<ChatClient>(endpoint);
  h.rewriter = std::make_unique<HttpRewriter>(h.client.get(), flags.trace);
  return h;
}

absl::StatusOr<ConfigMap> LoadConfig(const std::string& path) {
  if (path.empty()) return ConfigMap{};
  TR_ASSIGN_OR_RETURN(ConfigMap config, LoadKeyValueConfig(path));
  TR_RETURN_IF_ERROR(CheckConfigKeys(config));
  return config;
}

// Manifest bookkeeping shared by every command that writes artifacts.
class ManifestScope {
 public:
  ManifestScope(std::string command, const std::vector<std::string>& argv,
                ConfigMap config, uint64_t seed) {
    m_.command = std::move(command);
    m_.argv = argv;
    m_.config = std::move(config);
    m_.seed = seed;
    m_.started_at = UtcTimestampNow();
  }
  RunManifest& manifest() { return m_; }
  absl::Status Write(const std::string& path) {
    m_.finished_at = UtcTimestampNow();
    return SaveManifest(m_, path);
  }

 private:
  RunManifest m_;
};

absl::Status EnsureParentDir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) return absl::OkStatus();
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create '", parent.string(), "': ", ec.message()));
  }
  return absl::OkStatus();
}

// ---- perturb ---------------------------------------------------------------

struct PerturbFlags {
  std::string in;
  std::string out;
  std::string types = "all";
  uint64_t seed = 0;
  std::string config;
  bool offline_typos = false;
  int threads = 0;
  RewriterFlags rewriter;
};

absl::Status CmdPerturb(const PerturbFlags& f,
                        const std::vector<std::string>& argv,
                        std::ostream& out) {
  TR_ASSIGN_OR_RETURN(ConfigMap config, LoadConfig(f.config));
  PerturbConfig pc;
  TR_RETURN_IF_ERROR(ApplyPerturbConfig(config, &pc));
  pc.seed = f.seed;
  if (f.offline_typos) pc.offline_typos = true;
  if (f.threads > 0) pc.threads = f.threads;
  TR_ASSIGN_OR_RETURN(std::vector<std::string> types,
                      ResolveTypeSelector(f.types));
  ManifestScope scope("perturb", argv, config, f.seed);
  TR_ASSIGN_OR_RETURN(std::vector<Sample> clean, LoadSamples(f.in));
  for (const Sample& s : clean) {
    if (s.perturbation.has_value() && s.TypeCode() != kCleanTypeCode) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input sample '", s.id, "' is already perturbed"));
    }
  }
  TR_ASSIGN_OR_RETURN(RewriterHandle rh, MakeRewriter(f.rewriter, config));
  TR_ASSIGN_OR_RETURN(Suite suite, GenerateSuite(clean, MakeSuitePlan(types),
                                                 pc, rh.rewriter.get()));
  TR_ASSIGN_OR_RETURN(std::vector<std::string> written,
                      WriteSuite(f.out, suite, clean));
  scope.manifest().inputs = {f.in};
  scope.manifest().outputs = written;
  TR_RETURN_IF_ERROR(scope.Write((fs::path(f.out) / "manifest.json").string()));
  out << "perturbed " << suite.TotalPerturbed() << " samples over "
      << suite.types.size() << " types (" << clean.size() << " clean; skipped "
      << suite.skips.TotalByTable() << " by source, "
      << suite.skips.TotalNotApplicable() << " not applicable)\n";
  return absl::OkStatus();
}

// ---- run -------------------------------------------------------------------

struct RunFlags {
  std::string suite;
  std::string out;
  std::string mode = "static";
  std::string transition_type;
  std::string call_mode;
  std::string model;
  std::string config;
};

absl::StatusOr<std::vector<Sample>> LoadRunInputs(const std::string& path,
                                                  bool transition) {
  if (!fs::is_directory(path)) return LoadSamples(path);
  std::vector<Sample> all;
  std::vector<std::string> files = {"clean"};
  if (!transition) {
    for (const std::string& code : StaticTypeCodes()) files.push_back(code);
  }
  bool any = false;
  for (const std::string& name : files) {
    fs::path file = fs::path(path) / (name + ".jsonl");
    if (!fs::exists(file)) continue;
    any = true;
    TR_ASSIGN_OR_RETURN(std::vector<Sample> part, LoadSamples(file.string()));
    for (Sample& s : part) all.push_back(std::move(s));
  }
  if (!any) {
    return absl::NotFoundError(absl::StrCat("no suite files under '", path, "'"));
  }
  return all;
}

absl::Status CmdRun(const RunFlags& f, const std::vector<std::string>& argv,
                    std::ostream& out) {
  bool transition = f.mode == "transition";
  if (!f.transition_type.empty() && !transition) {
    return absl::InvalidArgumentError(
        "--transition-type requires --mode transition");
  }
  if (transition && f.transition_type.empty()) {
    return absl::InvalidArgumentError(
        "--mode transition requires --transition-type");
  }
  TR_ASSIGN_OR_RETURN(ConfigMap config, LoadConfig(f.config));
  EvalConfig eval;
  TR_RETURN_IF_ERROR(ApplyEndpointConfig(config, &eval.endpoint));
  if (!f.model.empty()) eval.endpoint.model = f.model;
  std::string call_mode = f.call_mode;
  if (call_mode.empty()) {
    auto it = config.find("mode");
    call_mode = it == config.end() ? "prompt" : it->second;
  }
  std::optional<RunMode> rm = ParseRunMode(call_mode);
  if (!rm.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown call mode '", call_mode, "'; use fc or prompt"));
  }
  eval.mode = *rm;
  std::vector<std::string> transition_codes;
  if (transition) {
    TR_ASSIGN_OR_RETURN(std::vector<std::string> codes,
                        ResolveTypeSelector(f.transition_type));
    for (const std::string& c : codes) {
      if (!IsTransitionType(c)) {
        return absl::InvalidArgumentError(
            absl::StrCat("'", c, "' is not a transition type"));
      }
    }
    transition_codes = std::move(codes);
  }
  TR_RETURN_IF_ERROR(ApplyEndpointEnvironment(&eval.endpoint));
  TR_RETURN_IF_ERROR(ValidateEvalConfig(eval));
  ManifestScope scope("run", argv, config, 0);
  TR_ASSIGN_OR_RETURN(std::vector<Sample> samples,
                      LoadRunInputs(f.suite, transition));
  ChatClient client(eval.endpoint);
  std::vector<PredictionRecord> records;
  if (!transition) {
    TR_ASSIGN_OR_RETURN(records, RunStatic(samples, client, eval));
  } else {
    for (const std::string& code : transition_codes) {
      EvalConfig per_type = eval;
      per_type.transition_type = code;
      TR_ASSIGN_OR_RETURN(std::vector<PredictionRecord> part,
                          RunTransition(samples, client, per_type));
      for (PredictionRecord& r : part) records.push_back(std::move(r));
    }
  }
  TR_RETURN_IF_ERROR(EnsureParentDir(f.out));
  TR_RETURN_IF_ERROR(SaveRecords(records, f.out));
  size_t failed = std::count_if(records.begin(), records.end(),
                                [](const PredictionRecord& r) {
                                  return r.run_error.has_value();
                                });
  scope.manifest().inputs = {f.suite};
  scope.manifest().outputs = {f.out};
  TR_RETURN_IF_ERROR(scope.Write(f.out + ".manifest.json"));
  out << "wrote " << records.size() << " records (" << failed
      << " run errors, " << client.request_count() << " requests)\n";
  return absl::OkStatus();
}

// ---- score -----------------------------------------------------------------

struct ScoreFlags {
  std::string predictions;
  std::vector<std::string> suites;
  std::string out;
  bool reparse = false;
};

using SampleIndex = std::map<std::pair<std::string, std::string>, Sample>;

absl::Status IndexSamples(const std::string& path, SampleIndex* index) {
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".jsonl") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  for (const std::string& file : files) {
    TR_ASSIGN_OR_RETURN(std::vector<Sample> samples, LoadSamples(file));
    for (Sample& s : samples) {
      auto key = std::make_pair(std::string(s.TypeCode()), s.id);
      index->emplace(std::move(key), std::move(s));
    }
  }
  return absl::OkStatus();
}

absl::Status CmdScore(const ScoreFlags& f, const std::vector<std::string>& argv,
                      std::ostream& out) {
  ManifestScope scope("score", argv, {}, 0);
  SampleIndex index;
  for (const std::string& s : f.suites) TR_RETURN_IF_ERROR(IndexSamples(s, &index));
  TR_ASSIGN_OR_RETURN(std::vector<PredictionRecord> records,
                      LoadRecords(f.predictions));
  std::vector<std::string> missing;
  size_t correct = 0;
  for (PredictionRecord& r : records) {
    const std::string& type = r.perturbation.type_code;
    auto it = index.find({type, r.sample_id});
    if (it == index.end() && IsTransitionType(type)) {
      it = index.find({std::string(kCleanTypeCode), r.sample_id});
    }
    if (it == index.end()) {
      missing.push_back(absl::StrCat(r.sample_id, " (", type, ")"));
      continue;
    }
    if (f.reparse) {
      r.tool_calls = ParseToolCalls(r.final_raw, it->second.source).tool_calls;
    }
    ScoreRecord(it->second, &r);
    if (r.score.has_value() && *r.score >= 1.0) ++correct;
  }
  if (!missing.empty()) {
    return absl::NotFoundError(absl::StrCat(
        "predictions reference unknown samples: ", absl::StrJoin(missing, ", ")));
  }
  std::string dest = f.out.empty() ? f.predictions : f.out;
  TR_RETURN_IF_ERROR(EnsureParentDir(dest));
  TR_RETURN_IF_ERROR(SaveRecords(records, dest));
  scope.manifest().inputs = f.suites;
  scope.manifest().inputs.insert(scope.manifest().inputs.begin(), f.predictions);
  scope.manifest().outputs = {dest};
  TR_RETURN_IF_ERROR(scope.Write(dest + ".manifest.json"));
  out << "scored " << records.size() << " records (" << correct
      << " fully correct)\n";
  return absl::OkStatus();
}

// ---- report ----------------------------------------------------------------

struct ReportFlags {
  std::vector<std::string> scored;
  std::string baseline;
  std::string out;
  std::string table;
  std::string model;
  int replicates = 10000;
  uint64_t seed = 0;
};

absl::StatusOr<std::vector<PredictionRecord>> LoadAllRecords(
    const std::vector<std::string>& paths) {
  std::vector<PredictionRecord> all;
  for (const std::string& p : paths) {
    TR_ASSIGN_OR_RETURN(std::vector<PredictionRecord> part, LoadRecords(p));
    for (PredictionRecord& r : part) all.push_back(std::move(r));
  }
  return all;
}

Json TallyToJson(const ErrorTally& tally) {
  Json out = Json::object();
  out["failed"] = tally.failed;
  out["modes"] = Json::object();
  for (const auto& [mode, mc] : tally.modes) {
    Json m = Json::object();
    m["count"] = mc.count;
    m["fraction"] = mc.fraction;
    out["modes"][ErrorModeName(mode)] = std::move(m);
  }
  return out;
}

absl::Status CmdReport(const ReportFlags& f,
                       const std::vector<std::string>& argv,
                       std::ostream& out) {
  ManifestScope scope("report", argv, {}, f.seed);
  TR_ASSIGN_OR_RETURN(std::vector<PredictionRecord> records,
                      LoadAllRecords(f.scored));
  std::optional<std::vector<PredictionRecord>> baseline;
  if (!f.baseline.empty()) {
    TR_ASSIGN_OR_RETURN(baseline, LoadRecords(f.baseline));
  }
  SummaryOptions options;
  options.model = f.model;
  options.replicates = f.replicates;
  options.seed = f.seed;
  TR_ASSIGN_OR_RETURN(
      ComponentSummary summary,
      BuildSummary(records, baseline.has_value() ? &*baseline : nullptr,
                   options));
  Json json = SummaryToJson(summary);
  json["error_modes"] = Json::object();
  json["error_modes"]["clean"] = TallyToJson(TallyErrorModes(
      records, [](const PredictionRecord& r) {
        return r.perturbation.component == Component::kNone;
      }));
  json["error_modes"]["perturbed"] = TallyToJson(TallyErrorModes(
      records, [](const PredictionRecord& r) {
        return r.perturbation.component != Component::kNone;
      }));
  std::string table = SummaryTable(summary);
  TR_RETURN_IF_ERROR(EnsureParentDir(f.out));
  TR_RETURN_IF_ERROR(WriteFileAtomically(f.out, json.dump(2) + "\n"));
  scope.manifest().inputs = f.scored;
  if (!f.baseline.empty()) scope.manifest().inputs.push_back(f.baseline);
  scope.manifest().outputs = {f.out};
  if (!f.table.empty()) {
    TR_RETURN_IF_ERROR(EnsureParentDir(f.table));
    TR_RETURN_IF_ERROR(WriteFileAtomically(f.table, table));
    scope.manifest().outputs.push_back(f.table);
  }
  TR_RETURN_IF_ERROR(scope.Write(f.out + ".manifest.json"));
  out << table;
  return absl::OkStatus();
}

// ---- compose-train ---------------------------------------------------------

struct ComposeFlags {
  std::string in;
  std::string out;
  std::string mode = "full";
  uint64_t seed = 0;
  std::string config;
  bool offline_typos = false;
  int threads = 0;
  RewriterFlags rewriter;
};

absl::Status CmdCompose(const ComposeFlags& f,
                        const std::vector<std::string>& argv,
                        std::ostream& out) {
  std::optional<ComposeMode> mode = ParseComposeMode(f.mode);
  if (!mode.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mode '", f.mode, "'; use full or mixed"));
  }
  TR_ASSIGN_OR_RETURN(ConfigMap config, LoadConfig(f.config));
  PerturbConfig pc;
  TR_RETURN_IF_ERROR(ApplyPerturbConfig(config, &pc));
  pc.seed = f.seed;
  if (f.offline_typos) pc.offline_typos = true;
  if (f.threads > 0) pc.threads = f.threads;
  ManifestScope scope("compose-train", argv, config, f.seed);
  TR_ASSIGN_OR_RETURN(std::vector<Sample> clean, LoadSamples(f.in));
  TR_ASSIGN_OR_RETURN(RewriterHandle rh, MakeRewriter(f.rewriter, config));
  TR_ASSIGN_OR_RETURN(TrainingSet set,
                      ComposeTrainingSet(clean, *mode, pc, rh.rewriter.get()));
  std::error_code ec;
  fs::create_directories(f.out, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create '", f.out, "': ", ec.message()));
  }
  std::string train = (fs::path(f.out) / "train.jsonl").string();
  std::string val = (fs::path(f.out) / "val.jsonl").string();
  std::string summary = (fs::path(f.out) / "composition.json").string();
  TR_RETURN_IF_ERROR(SaveSamples(set.train, train));
  TR_RETURN_IF_ERROR(SaveSamples(set.val, val));
  TR_RETURN_IF_ERROR(WriteFileAtomically(
      summary, TrainingSetSummaryToJson(set, *mode).dump(2) + "\n"));
  scope.manifest().inputs = {f.in};
  scope.manifest().outputs = {train, val, summary};
  TR_RETURN_IF_ERROR(scope.Write((fs::path(f.out) / "manifest.json").string()));
  out << "train " << set.train.size() << ", val " << set.val.size()
      << " (clean rows " << set.clean_rows << ", perturbed rows "
      << set.perturbed_rows << ")\n";
  return absl::OkStatus();
}

// ---- parse -----------------------------------------------------------------

struct ParseFlags {
  std::string source;
  std::string in;
  std::string text;
};

absl::Status CmdParse(const ParseFlags& f, std::ostream& out) {
  std::optional<Source> source = ParseSource(f.source);
  if (!source.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown source '", f.source, "'"));
  }
  std::string text = f.text;
  if (!f.in.empty()) {
    TR_ASSIGN_OR_RETURN(text, ReadFile(f.in));
  }
  ParseOutcome outcome = ParseToolCalls(text, *source);
  Json json = Json::object();
  json["variant"] = outcome.variant_used;
  json["tool_calls"] = Json::array();
  for (const ToolCall& c : outcome.tool_calls) {
    json["tool_calls"].push_back(ToolCallToJson(c));
  }
  out << DumpJson(json) << "\n";
  return absl::OkStatus();
}

// ---- audit -----------------------------------------------------------------

struct AuditFlags {
  std::string clean;
  std::string perturbed;
  std::string out;
  std::string config;
  RewriterFlags judge;
};

absl::StatusOr<std::vector<AuditPair>> BuildAuditPairs(
    const std::vector<Sample>& clean, const std::vector<Sample>& perturbed) {
  std::map<std::string, const Sample*> by_id;
  for (const Sample& s : clean) by_id[s.id] = &s;
  std::vector<AuditPair> pairs;
  for (const Sample& p : perturbed) {
    auto it = by_id.find(p.id);
    if (it == by_id.end()) {
      return absl::NotFoundError(
          absl::StrCat("perturbed sample '", p.id, "' has no clean original"));
    }
    const Sample& c = *it->second;
    std::string_view type = p.TypeCode();
    if (type == "paraphrase_tool_description") {
      for (size_t i = 0; i < c.tools.size() && i < p.tools.size(); ++i) {
        if (c.tools[i].description.empty()) continue;
        pairs.push_back({c.tools[i].description, p.tools[i].description,
                         absl::StrCat(p.id, "#", c.tools[i].name)});
      }
    } else if (type == "paraphrase_parameter_description") {
      for (size_t i = 0; i < c.tools.size() && i < p.tools.size(); ++i) {
        for (size_t k = 0; k < c.tools[i].parameters.size() &&
                           k < p.tools[i].parameters.size();
             ++k) {
          const auto& [name, spec] = c.tools[i].parameters[k];
          if (spec.description.empty()) continue;
          pairs.push_back({spec.description,
                           p.tools[i].parameters[k].second.description,
                           absl::StrCat(p.id, "#", c.tools[i].name, ".", name)});
        }
      }
    } else {
      std::optional<size_t> ci = c.FinalUserTurnIndex();
      std::optional<size_t> pi = p.FinalUserTurnIndex();
      if (!ci.has_value() || !pi.has_value()) continue;
      pairs.push_back({c.dialog[*ci].content, p.dialog[*pi].content, p.id});
    }
  }
  return pairs;
}

absl::Status CmdAudit(const AuditFlags& f, const std::vector<std::string>& argv,
                      std::ostream& out) {
  TR_ASSIGN_OR_RETURN(ConfigMap config, LoadConfig(f.config));
  if (f.judge.kind == "none") {
    return absl::InvalidArgumentError("audit needs --judge stub|endpoint|replay");
  }
  ManifestScope scope("audit", argv, config, 0);
  TR_ASSIGN_OR_RETURN(std::vector<Sample> clean, LoadSamples(f.clean));
  TR_ASSIGN_OR_RETURN(std::vector<Sample> perturbed, LoadSamples(f.perturbed));
  TR_ASSIGN_OR_RETURN(std::vector<AuditPair> pairs,
                      BuildAuditPairs(clean, perturbed));
  TR_ASSIGN_OR_RETURN(RewriterHandle rh, MakeRewriter(f.judge, config));
  TR_ASSIGN_OR_RETURN(AuditResult result, AuditPairs(pairs, *rh.rewriter));
  TR_RETURN_IF_ERROR(EnsureParentDir(f.out));
  TR_RETURN_IF_ERROR(
      WriteFileAtomically(f.out, AuditResultToJson(result).dump(2) + "\n"));
  scope.manifest().inputs = {f.clean, f.perturbed};
  scope.manifest().outputs = {f.out};
  TR_RETURN_IF_ERROR(scope.Write(f.out + ".manifest.json"));
  out << "audited " << result.summary.scored << " pairs (skipped "
      << result.skipped_empty << " empty, " << result.failed_ids.size()
      << " judge failures)";
  if (result.summary.defined) {
    out << ", mean " << FormatReal(result.summary.mean) << ", median "
        << FormatReal(result.summary.median);
  }
  out << "\n";
  return absl::OkStatus();
}

int Finish(const absl::Status& status, std::ostream& err) {
  if (!status.ok()) err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kAlreadyExists:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitInvalid;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kAborted:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kResourceExhausted:
      return kExitGeneration;
    default:
      return kExitInternal;
  }
}

absl::Status CheckConfigKeys(const ConfigMap& config) {
  for (const auto& [key, value] : config) {
    if (key == "api_key") {
      return absl::InvalidArgumentError(absl::StrCat(
          "api keys are read from ", kApiKeyEnvVar, ", not from config files"));
    }
    if (PerturbKeys().count(key) == 0 && EndpointKeys().count(key) == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::Status ApplyPerturbConfig(const ConfigMap& config, PerturbConfig* out) {
  for (const auto& [key, v] : config) {
    if (key == "hint_phrase_pool_cost") {
      out->hint_phrase_pool_cost = PhraseList(v);
    } else if (key == "hint_phrase_pool_speed") {
      out->hint_phrase_pool_speed = PhraseList(v);
    } else if (key == "abbreviation_min_len") {
      TR_ASSIGN_OR_RETURN(out->abbreviation_min_len, IntValue(key, v));
    } else if (key == "abbreviation_keep") {
      TR_ASSIGN_OR_RETURN(out->abbreviation_keep, IntValue(key, v));
    } else if (key == "redundant_count") {
      TR_ASSIGN_OR_RETURN(out->redundant_count, IntValue(key, v));
    } else if (key == "offline_typos") {
      TR_ASSIGN_OR_RETURN(out->offline_typos, BoolValue(key, v));
    } else if (key == "rewrite_reward_descriptions") {
      TR_ASSIGN_OR_RETURN(out->rewrite_reward_descriptions, BoolValue(key, v));
    } else if (key == "threads") {
      TR_ASSIGN_OR_RETURN(out->threads, IntValue(key, v));
    }
  }
  return ValidatePerturbConfig(*out);
}

absl::Status ApplyEndpointConfig(const ConfigMap& config, EndpointConfig* out) {
  for (const auto& [key, v] : config) {
    if (key == "endpoint") {
      out->base_url = v;
    } else if (key == "model") {
      out->model = v;
    } else if (key == "temperature") {
      TR_ASSIGN_OR_RETURN(out->temperature, RealValue(key, v));
    } else if (key == "max_tokens") {
      TR_ASSIGN_OR_RETURN(out->max_tokens, IntValue(key, v));
    } else if (key == "disable_thinking") {
      TR_ASSIGN_OR_RETURN(out->disable_thinking, BoolValue(key, v));
    } else if (key == "max_retries") {
      TR_ASSIGN_OR_RETURN(out->max_retries, IntValue(key, v));
    } else if (key == "backoff_initial") {
      TR_ASSIGN_OR_RETURN(out->backoff_initial_seconds, RealValue(key, v));
    } else if (key == "backoff_max") {
      TR_ASSIGN_OR_RETURN(out->backoff_max_seconds, RealValue(key, v));
    } else if (key == "request_timeout") {
      TR_ASSIGN_OR_RETURN(out->request_timeout_seconds, RealValue(key, v));
    } else if (key == "concurrency_limit") {
      TR_ASSIGN_OR_RETURN(out->concurrency_limit, IntValue(key, v));
    } else if (key == "rate_limit") {
      TR_ASSIGN_OR_RETURN(out->rate_limit_per_second, RealValue(key, v));
    }
  }
  return absl::OkStatus();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Robustness harness for tool-calling models", "toolrobust"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  PerturbFlags pf;
  CLI::App* perturb = app.add_subcommand("perturb", "Generate a perturbation suite");
  perturb->add_option("--in", pf.in, "Clean samples (JSONL)")->required();
  perturb->add_option("--out", pf.out, "Suite directory")->required();
  perturb->add_option("--types", pf.types,
                      "all, all-static, component names or type codes");
  perturb->add_option("--seed", pf.seed, "Global seed");
  perturb->add_option("--config", pf.config, "key = value config file");
  perturb->add_flag("--offline-typos", pf.offline_typos,
                    "Generate realistic_typos without a rewriter");
  perturb->add_option("--threads", pf.threads, "Worker threads");
  AddRewriterFlags(perturb, &pf.rewriter);

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "Run samples against an endpoint");
  run->add_option("--suite", rf.suite, "Suite directory or JSONL file")->required();
  run->add_option("--out", rf.out, "Predictions file")->required();
  run->add_option("--mode", rf.mode, "static or transition")
      ->check(CLI::IsMember({"static", "transition"}));
  run->add_option("--transition-type", rf.transition_type,
                  "Transition type code(s), or 'transition' for all six");
  run->add_option("--call-mode", rf.call_mode, "fc or prompt");
  run->add_option("--model", rf.model, "Model name sent to the endpoint");
  run->add_option("--config", rf.config, "key = value config file");

  ScoreFlags sf;
  CLI::App* score = app.add_subcommand("score", "Score predictions");
  score->add_option("--predictions", sf.predictions, "Predictions file")->required();
  score->add_option("--suite", sf.suites, "Suite directories or files")->required();
  score->add_option("--out", sf.out, "Scored output (default: in place)");
  score->add_flag("--reparse", sf.reparse, "Re-parse final_raw before scoring");

  ReportFlags pf2;
  CLI::App* report = app.add_subcommand("report", "Summarise scored predictions");
  report->add_option("--scored", pf2.scored, "Scored prediction files")->required();
  report->add_option("--baseline", pf2.baseline, "Scored baseline predictions");
  report->add_option("--out", pf2.out, "Summary JSON")->required();
  report->add_option("--table", pf2.table, "Also write the text table here");
  report->add_option("--model", pf2.model, "Model label");
  report->add_option("--replicates", pf2.replicates, "Bootstrap replicates");
  report->add_option("--seed", pf2.seed, "Bootstrap seed");

  ComposeFlags cf;
  CLI::App* compose = app.add_subcommand("compose-train", "Compose a training set");
  compose->add_option("--in", cf.in, "Clean samples (JSONL)")->required();
  compose->add_option("--out", cf.out, "Output directory")->required();
  compose->add_option("--mode", cf.mode, "full or mixed");
  compose->add_option("--seed", cf.seed, "Global seed");
  compose->add_option("--config", cf.config, "key = value config file");
  compose->add_flag("--offline-typos", cf.offline_typos,
                    "Generate realistic_typos without a rewriter");
  compose->add_option("--threads", cf.threads, "Worker threads");
  AddRewriterFlags(compose, &cf.rewriter);

  ParseFlags xf;
  CLI::App* parse = app.add_subcommand("parse", "Parse tool calls from text");
  parse->add_option("--source", xf.source, "Source benchmark")->required();
  auto* parse_in = parse->add_option("--in", xf.in, "File holding the raw text");
  auto* parse_text = parse->add_option("--text", xf.text, "Raw text");
  parse_in->excludes(parse_text);

  AuditFlags af;
  CLI::App* audit = app.add_subcommand("audit", "Judge paraphrase fidelity");
  audit->add_option("--clean", af.clean, "Clean samples")->required();
  audit->add_option("--perturbed", af.perturbed, "Perturbed samples")->required();
  audit->add_option("--out", af.out, "Audit JSON")->required();
  audit->add_option("--config", af.config, "key = value config file");
  AddRewriterFlags(audit, &af.judge, "--judge");

  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a recorded command");
  replay->add_option("--manifest", manifest_path, "Manifest file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (perturb->parsed()) return Finish(CmdPerturb(pf, args, out), err);
    if (run->parsed()) return Finish(CmdRun(rf, args, out), err);
    if (score->parsed()) return Finish(CmdScore(sf, args, out), err);
    if (report->parsed()) return Finish(CmdReport(pf2, args, out), err);
    if (compose->parsed()) return Finish(CmdCompose(cf, args, out), err);
    if (parse->parsed()) return Finish(CmdParse(xf, out), err);
    if (audit->parsed()) return Finish(CmdAudit(af, args, out), err);
    if (replay->parsed()) {
      absl::StatusOr<RunManifest> m = LoadManifest(manifest_path);
      if (!m.ok()) return Finish(m.status(), err);
      if (m->argv.empty() || m->argv.front() == "replay") {
        return Finish(absl::InvalidArgumentError(
                          "manifest does not record a replayable command"),
                      err);
      }
      return RunCli(m->argv, out, err);
    }
  } catch (const std::exception& e) {
    return Finish(absl::InternalError(e.what()), err);
  }
  return Finish(absl::InternalError("no command ran"), err);
}

}  // namespace toolrobust
