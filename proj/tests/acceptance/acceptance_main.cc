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


// Acceptance checks for the end-to-end properties of the toolkit. Prints one
// PASS or FAIL line per criterion and exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "testing/files.h"
#include "testing/fixtures.h"
#include "testing/mock_chat_server.h"
#include "testing/oracles.h"
#include "toolrobust/cli.h"
#include "toolrobust/parser.h"
#include "toolrobust/perturb.h"
#include "toolrobust/record.h"
#include "toolrobust/rewriter.h"
#include "toolrobust/rng.h"
#include "toolrobust/runner.h"
#include "toolrobust/scoring.h"
#include "toolrobust/stats.h"
#include "toolrobust/taxonomy.h"

namespace toolrobust {
namespace {

using ::toolrobust::testing::BenchmarkCorpusSpec;
using ::toolrobust::testing::CheckSelfScore;
using ::toolrobust::testing::CompareScorerWithOracle;
using ::toolrobust::testing::Completion;
using ::toolrobust::testing::ExhaustiveBootstrap;
using ::toolrobust::testing::HashArtifacts;
using ::toolrobust::testing::HashFile;
using ::toolrobust::testing::MakeCall;
using ::toolrobust::testing::MakeSample;
using ::toolrobust::testing::MakeTool;
using ::toolrobust::testing::MockChatServer;
using ::toolrobust::testing::OracleComparison;
using ::toolrobust::testing::RandomCall;
using ::toolrobust::testing::ScratchDir;
using ::toolrobust::testing::SyntheticCorpus;
using ::toolrobust::testing::TrainingCorpus;

// Collects failed expectations for one criterion.
class Checker {
 public:
  void Expect(bool condition, const std::string& what) {
    if (!condition) failures_.push_back(what);
  }
  void Note(const std::string& text) { notes_.push_back(text); }
  bool ok() const { return failures_.empty(); }
  std::string Detail() const {
    std::string out;
    for (const std::string& f : failures_) absl::StrAppend(&out, " FAILED: ", f, ";");
    for (const std::string& n : notes_) absl::StrAppend(&out, " ", n, ";");
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Criterion {
  int number;
  std::string title;
  double time_limit_seconds;
  std::function<void(Checker&)> body;
};

void ErrorStrings(Checker& c) {
  const std::map<std::string, std::string> kGoldens = {
      {"transient_timeout",
       "Tool execution timed out after the configured request timeout. The "
       "remote endpoint did not respond within the allotted time."},
      {"transient_rate_limit",
       "HTTP 429 Too Many Requests. The provider rejected the call because "
       "the per-minute rate limit has been exceeded."},
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
  };
  std::vector<std::string> codes = TypeCodesFor(Component::kTransition);
  c.Expect(codes.size() == 6, "six transition types");
  for (const std::string& code : codes) {
    std::optional<std::string_view> got = TransitionErrorString(code);
    auto want = kGoldens.find(code);
    c.Expect(got.has_value() && want != kGoldens.end() && *got == want->second,
             code);
  }
  c.Note("6/6 strings byte-equal");
}

void SuiteCounts(Checker& c) {
  std::vector<Sample> clean = SyntheticCorpus(BenchmarkCorpusSpec());
  std::map<Source, int> per_source;
  for (const Sample& s : clean) ++per_source[s.source];
  c.Expect(clean.size() == 199, "199 clean samples");
  c.Expect(per_source[Source::kBfclV3] == 32 &&
               per_source[Source::kApiBank] == 74 &&
               per_source[Source::kRotBench] == 21 &&
               per_source[Source::kToolAlpaca] == 21 &&
               per_source[Source::kToolEyes] == 51,
           "source proportions 32/74/21/21/51");
  StubRewriter stub;
  PerturbConfig config;
  config.seed = 7;
  absl::StatusOr<Suite> suite = GenerateSuite(
      clean, MakeSuitePlan(*ResolveTypeSelector("all")), config, &stub);
  if (!suite.ok()) {
    c.Expect(false, suite.status().ToString());
    return;
  }
  int64_t total = suite->TotalPerturbed() + static_cast<int64_t>(clean.size());
  c.Expect(suite->TotalPerturbed() == 3522, "3522 perturbed");
  c.Expect(total == 3721, "3721 records");
  c.Note(absl::StrCat(suite->TotalPerturbed(), " perturbed + ", clean.size(),
                      " clean = ", total, " (", suite->skips.TotalByTable(),
                      " skipped by source, ", suite->skips.TotalNotApplicable(),
                      " not applicable)"));
}

void ParserRoundTrip(Checker& c) {
  ParseOutcome bfcl = ParseToolCalls("[country_info.capital(country=\"Brazil\")]",
                                     Source::kBfclV3);
  c.Expect(bfcl.tool_calls == std::vector<ToolCall>{MakeCall(
                                  "country_info.capital", {{"country", "Brazil"}})},
           "bracketed call example");
  ParseOutcome xml = ParseToolCalls(
      "<tool_call>{\"name\":\"QueryBalance\",\"parameters\":{\"token\":"
      "\"p9o8i7u6y5t4r3e2w1q\"}}</tool_call>",
      Source::kApiBank);
  c.Expect(xml.tool_calls == std::vector<ToolCall>{MakeCall(
                                 "QueryBalance", {{"token", "p9o8i7u6y5t4r3e2w1q"}})},
           "XML QueryBalance example");

  std::map<Family, int> per_family;
  for (const std::string& variant : SerializationVariants()) {
    Source source = *SourceForVariant(variant);
    Family family = *VariantFamily(variant);
    Rng rng(StableHash(variant));
    int ok = 0;
    int attempts = 0;
    while (ok < 1000 && attempts < 2000) {
      ++attempts;
      ToolCall call = RandomCall(rng, variant == "query_string");
      absl::StatusOr<std::string> text = SerializeCall(call, variant);
      if (!text.ok()) continue;
      ParseOutcome out = ParseToolCalls(*text, source);
      if (out.tool_calls != std::vector<ToolCall>{call}) {
        c.Expect(false, absl::StrCat("roundtrip ", variant, ": ", *text));
        break;
      }
      ++ok;
    }
    c.Expect(ok == 1000, absl::StrCat(variant, " reached 1000 roundtrips"));
    per_family[family] += ok;
  }
  int min_family = 1 << 30;
  for (const auto& [family, n] : per_family) min_family = std::min(min_family, n);
  c.Note(absl::StrCat(SerializationVariants().size(), " variants over ",
                      per_family.size(), " families, >= ", min_family,
                      " roundtrips per family"));

  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    int n = static_cast<int>(rng.Uniform(200));
    for (int k = 0; k < n; ++k) text.push_back(static_cast<char>(rng.Uniform(256)));
    for (Source s : AllSources()) {
      ParseOutcome out = ParseToolCalls(text, s);
      if ((out.variant_used == "none") != out.tool_calls.empty()) {
        c.Expect(false, "fuzz outcome consistency");
      }
    }
  }
  c.Note("10000 random byte strings parsed without crashing");
}

void ScorerOracle(Checker& c) {
  size_t total = 0;
  for (Source source : AllSources()) {
    OracleComparison cmp = CompareScorerWithOracle(source);
    OracleComparison self = CheckSelfScore(source);
    c.Expect(cmp.cases >= 10000, SourceName(source) + " >= 10000 cases");
    c.Expect(cmp.mismatches == 0,
             absl::StrCat(SourceName(source), " ", cmp.mismatches, " mismatches"));
    c.Expect(self.mismatches == 0, SourceName(source) + " self-score");
    total += cmp.cases;
  }
  c.Note(absl::StrCat(total, " enumerated cases over ", AllSources().size(),
                      " sources, 100% agreement"));
}

constexpr char kBalanceCall[] =
    "<tool_call>{\"name\":\"QueryBalance\",\"parameters\":{\"token\":"
    "\"p9o8i7u6y5t4r3e2w1q\"}}</tool_call>";

Sample BalanceSample() {
  return MakeSample(
      "apibank__level1_7", Source::kApiBank,
      "Can you check my balance? My token is p9o8i7u6y5t4r3e2w1q.",
      {MakeTool("QueryBalance", "Query the account balance.",
                {{"token", "string", "User token."}}),
       MakeTool("GetUserToken", "Get the user token.",
                {{"username", "string", "User name."}})},
      {MakeCall("QueryBalance", {{"token", "p9o8i7u6y5t4r3e2w1q"}})});
}

struct TransitionResult {
  PredictionRecord record;
  std::vector<Json> requests;
};

absl::StatusOr<TransitionResult> RunOne(RunMode mode, const std::string& type,
                                        MockChatServer::Handler handler) {
  MockChatServer server(std::move(handler));
  EvalConfig config;
  config.endpoint.base_url = server.base_url();
  config.endpoint.model = "mock";
  config.endpoint.max_retries = 0;
  config.endpoint.backoff_initial_seconds = 0;
  config.mode = mode;
  config.transition_type = type;
  ChatClient client(config.endpoint);
  TR_ASSIGN_OR_RETURN(std::vector<PredictionRecord> records,
                      RunTransition({BalanceSample()}, client, config));
  PredictionRecord r = records.at(0);
  ScoreRecord(BalanceSample(), &r);
  return TransitionResult{r, server.requests()};
}

void TransitionProtocol(Checker& c) {
  for (const std::string& type : TypeCodesFor(Component::kTransition)) {
    const std::string error(*TransitionErrorString(type));
    absl::StatusOr<TransitionResult> recover =
        RunOne(RunMode::kPrompt, type,
               [](const Json&, int) { return Completion(kBalanceCall); });
    if (!recover.ok()) {
      c.Expect(false, recover.status().ToString());
      return;
    }
    c.Expect(recover->requests.size() == 2, type + ": 2 requests");
    c.Expect(recover->requests.size() == 2 &&
                 recover->requests[1]["messages"].back()["content"] ==
                     "Tool response: " + error,
             type + ": prompt injection");
    c.Expect(recover->record.injected_error == error, type + ": recorded error");
    c.Expect(recover->record.score == 1.0, type + ": recovery scores 1.0");

    Json native = Json::array(
        {{{"id", "abc"},
          {"type", "function"},
          {"function",
           {{"name", "QueryBalance"},
            {"arguments", "{\"token\":\"p9o8i7u6y5t4r3e2w1q\"}"}}}}});
    absl::StatusOr<TransitionResult> fc =
        RunOne(RunMode::kFc, type, [&](const Json&, int) {
          return Completion("", native);
        });
    if (fc.ok() && fc->requests.size() == 2) {
      const Json& last = fc->requests[1]["messages"].back();
      c.Expect(last["role"] == "tool" && last["content"] == error,
               type + ": native tool message byte-equal");
      c.Expect(fc->record.score == 1.0, type + ": native recovery scores 1.0");
    } else {
      c.Expect(false, type + ": native run");
    }

    absl::StatusOr<TransitionResult> text_only =
        RunOne(RunMode::kPrompt, type, [](const Json&, int i) {
          return Completion(i == 0 ? kBalanceCall : "Please resend your token.");
        });
    c.Expect(text_only.ok() && text_only->requests.size() == 2 &&
                 text_only->record.score == 0.0 &&
                 text_only->record.error_mode == ErrorMode::kOmittedToolCall,
             type + ": text-only recovery is 0.0 omitted_tool_call");

    absl::StatusOr<TransitionResult> no_call =
        RunOne(RunMode::kPrompt, type, [](const Json&, int) {
          return Completion("Which account do you mean?");
        });
    c.Expect(no_call.ok() && no_call->requests.size() == 1 &&
                 no_call->record.no_injection,
             type + ": no call means 1 request");
  }
  c.Note("6 types x {recover, native, text-only, no-call}");
}

std::vector<double> Binary(int n, int successes) {
  std::vector<double> v(n, 0.0);
  std::fill(v.begin(), v.begin() + successes, 1.0);
  return v;
}

void Statistics(Checker& c) {
  const std::vector<std::vector<double>> kVectors = {
      {0.0, 1.0}, {0.2, 0.9}, {0.0, 0.5, 1.0}, {0.1, 0.4, 0.9}, {1.0, 1.0, 0.0}};
  double worst = 0;
  for (const auto& x : kVectors) {
    Estimate want = ExhaustiveBootstrap(x);
    Estimate got = *BootstrapCi(x, 100000, 17);
    worst = std::max({worst, std::fabs(got.mean - want.mean),
                      std::fabs(got.halfwidth - want.halfwidth)});
  }
  c.Expect(worst <= 0.02, "(a) exhaustive oracle within 0.02");
  c.Note(absl::StrFormat("(a) max deviation %.4f", worst));

  Estimate e = *BootstrapCi(Binary(199, 128), 10000, 0);
  c.Expect(std::fabs(e.mean - 0.643) < 0.0005, "(b) mean 0.643");
  c.Expect(std::fabs(e.halfwidth - 0.065) <= 0.01, "(b) halfwidth near 0.065");
  c.Note(absl::StrFormat("(b) %.3f +/- %.3f", e.mean, e.halfwidth));

  double r = *Retention(0.643, 0.009, 0.147, 0.331);
  c.Expect(std::fabs(r - 0.748) <= 0.001, "(c) retention 0.748");
  c.Note(absl::StrFormat("(c) retention %.4f", r));

  Estimate drop = *ComponentDrop(Binary(199, 128), {Binary(199, 120)}, 1000, 0);
  double rounded = std::round(drop.mean * 1000) / 1000;
  c.Expect(std::round(128000.0 / 199) / 1000 == 0.643 &&
               std::round(120000.0 / 199) / 1000 == 0.603 && rounded == 0.040,
           "(d) 0.643 - 0.603 = 0.040");
  c.Note(absl::StrFormat("(d) drop %.3f", rounded));

  const int kTrials = 1000;
  Rng rng(99);
  int covered = 0;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<double> x(100);
    for (double& v : x) v = rng.UniformReal() < 0.6 ? 1.0 : 0.0;
    Estimate ci = *BootstrapCi(x, 1000, static_cast<uint64_t>(t));
    if (std::fabs(ci.mean - 0.6) <= ci.halfwidth) ++covered;
  }
  double coverage = static_cast<double>(covered) / kTrials;
  c.Expect(coverage >= 0.93 && coverage <= 0.97, "(e) coverage in [0.93, 0.97]");
  c.Note(absl::StrFormat("(e) coverage %.3f", coverage));
}

void ErrorModeTally(Checker& c) {
  std::vector<PredictionRecord> records;
  auto add = [&](double score, std::string raw, std::vector<ToolCall> calls) {
    PredictionRecord r;
    r.sample_id = absl::StrCat("s", records.size());
    r.final_raw = std::move(raw);
    r.tool_calls = std::move(calls);
    r.score = score;
    records.push_back(std::move(r));
  };
  for (int i = 0; i < 428; ++i) add(0.0, "[f(a=2)]", {MakeCall("f", {{"a", 2}})});
  for (int i = 0; i < 380; ++i) add(0.0, "I need more details.", {});
  for (int i = 0; i < 300; ++i) add(1.0, "[f(a=1)]", {MakeCall("f", {{"a", 1}})});
  ErrorTally tally = TallyErrorModes(records);
  double wrong = std::round(tally.modes[ErrorMode::kWrongCall].fraction * 1000) / 10;
  double omitted =
      std::round(tally.modes[ErrorMode::kOmittedToolCall].fraction * 1000) / 10;
  c.Expect(tally.failed == 808, "808 failures");
  c.Expect(wrong == 53.0 && omitted == 47.0, "53.0% / 47.0%");
  c.Note(absl::StrFormat("wrong %.1f%%, omitted %.1f%%", wrong, omitted));
}

void ComposeTrain(Checker& c) {
  StubRewriter stub;
  PerturbConfig config;
  config.seed = 5;
  absl::StatusOr<TrainingSet> full =
      ComposeTrainingSet(TrainingCorpus(3984), ComposeMode::kFull, config, &stub);
  if (!full.ok()) {
    c.Expect(false, full.status().ToString());
    return;
  }
  c.Expect(full->train.size() == 3905 && full->val.size() == 79, "full 3905/79");
  int64_t lo = INT64_MAX;
  int64_t hi = 0;
  for (const auto& [code, n] : full->type_counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  c.Expect(full->type_counts.size() == 16 && hi - lo <= 1,
           "16 static types uniform within 1");
  absl::StatusOr<TrainingSet> mixed =
      ComposeTrainingSet(TrainingCorpus(4000), ComposeMode::kMixed, config, &stub);
  if (!mixed.ok()) {
    c.Expect(false, mixed.status().ToString());
    return;
  }
  c.Expect(mixed->clean_rows == 2006 && mixed->perturbed_rows == 1994,
           "mixed 2006/1994");
  c.Note(absl::StrFormat("full %d/%d, per-type %d..%d; mixed %d/%d",
                         full->train.size(), full->val.size(), lo, hi,
                         mixed->clean_rows, mixed->perturbed_rows));
}

int Cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  return RunCli(args, out, err);
}

void Determinism(Checker& c) {
  ScratchDir dir("acceptance");
  std::string clean = dir.Join("clean.jsonl");
  std::vector<Sample> corpus = SyntheticCorpus(BenchmarkCorpusSpec());
  if (!SaveSamples(corpus, clean).ok()) {
    c.Expect(false, "write corpus");
    return;
  }
  auto perturb = [&](const std::string& name, const std::string& threads) {
    std::string out = dir.Join(name);
    int code = Cli({"perturb", "--in", clean, "--out", out, "--types", "all",
                    "--seed", "11", "--rewriter", "stub", "--threads", threads});
    c.Expect(code == 0, "perturb " + name);
    return HashArtifacts(out);
  };
  std::map<std::string, uint64_t> a = perturb("p1", "1");
  std::map<std::string, uint64_t> b = perturb("p2", "4");
  c.Expect(!a.empty() && a == b, "perturb artifacts identical");

  std::vector<PredictionRecord> records;
  Rng rng(5);
  for (const std::string& code : std::vector<std::string>{
           "clean", "realistic_typos", "same_name_A", "CD", "transient_timeout"}) {
    for (const Sample& s : corpus) {
      PredictionRecord r;
      r.sample_id = s.id;
      r.source = s.source;
      r.perturbation = *MakeDescriptor(code, 11);
      r.score = rng.UniformReal() < 0.6 ? 1.0 : 0.0;
      r.final_raw = *r.score == 1.0 ? "[f(a=1)]" : "";
      records.push_back(std::move(r));
    }
  }
  std::string scored = dir.Join("scored.jsonl");
  c.Expect(SaveRecords(records, scored).ok(), "write scored records");
  auto report = [&](const std::string& name) {
    std::string out = dir.Join(name);
    int code = Cli({"report", "--scored", scored, "--out", out, "--table",
                    out + ".txt", "--replicates", "2000", "--seed", "11"});
    c.Expect(code == 0, "report " + name);
    return std::make_pair(HashFile(out), HashFile(out + ".txt"));
  };
  c.Expect(report("r1.json") == report("r2.json"), "report artifacts identical");
  c.Note(absl::StrCat(a.size(), " perturb artifacts and 2 report artifacts hashed"));
}

int Main() {
  unsetenv(kEndpointEnvVar);
  const std::vector<Criterion> kCriteria = {
      {1, "transition error strings", 1, ErrorStrings},
      {2, "suite counts", 10, SuiteCounts},
      {3, "parser roundtrip and fuzz", 30, ParserRoundTrip},
      {4, "scorer oracle", 60, ScorerOracle},
      {5, "transition protocol", 10, TransitionProtocol},
      {6, "statistics", 300, Statistics},
      {7, "error-mode tally", 1, ErrorModeTally},
      {8, "compose-train", 10, ComposeTrain},
      {9, "determinism", 30, Determinism},
  };
  int failed = 0;
  for (const Criterion& criterion : kCriteria) {
    Checker checker;
    auto start = std::chrono::steady_clock::now();
    criterion.body(checker);
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    checker.Expect(seconds <= criterion.time_limit_seconds,
                   absl::StrFormat("runtime over %.0fs", criterion.time_limit_seconds));
    if (!checker.ok()) ++failed;
    std::printf("%s %d %s (%.2fs):%s\n", checker.ok() ? "PASS" : "FAIL",
                criterion.number, criterion.title.c_str(), seconds,
                checker.Detail().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(kCriteria.size()) - failed, kCriteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace toolrobust

int main() { return toolrobust::Main(); }
