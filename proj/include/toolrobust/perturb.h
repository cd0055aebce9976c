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


// Static perturbation generators, suite assembly and training-set
// composition.
//
// Every generator is a pure function of (sample, seed) apart from rewriter
// calls. Random draws come from SampleRng(seed, sample id, type code), so a
// sample's perturbation does not depend on the rest of the batch.

#ifndef TOOLROBUST_PERTURB_H_
#define TOOLROBUST_PERTURB_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toolrobust/corpus.h"
#include "toolrobust/rewriter.h"
#include "toolrobust/status.h"

namespace toolrobust {

struct PerturbConfig {
  uint64_t seed = 0;
  std::vector<std::string> hint_phrase_pool_cost = {
      "Please use a cost-effective option.",
      "Use the cheapest available tool if possible."};
  std::vector<std::string> hint_phrase_pool_speed = {
      "Please use the quickest method."};
  int abbreviation_min_len = 6;
  int abbreviation_keep = 3;
  int redundant_count = 4;
  // realistic_typos uses the keyboard-noise generator instead of a rewriter.
  bool offline_typos = false;
  // Reward types ask the rewriter for the misleading and favourable
  // descriptions instead of appending the fixed sentences.
  bool rewrite_reward_descriptions = false;
  // Worker threads used by GenerateSuite and ComposeTrainingSet.
  int threads = 1;
};

absl::Status ValidatePerturbConfig(const PerturbConfig& config);

inline constexpr std::string_view kCostPenaltySentence =
    "Note: this variant incurs higher per-call cost.";
inline constexpr std::string_view kSpeedPenaltySentence =
    "Typical response time: 30s (slow).";
inline constexpr std::string_view kCostFavourSentence =
    "Note: this variant is low-cost.";
inline constexpr std::string_view kSpeedFavourSentence =
    "Typical response time: responds in under 1s.";

// Truncates the first "."/"_"-separated segment of at least `min_len`
// characters to `keep` characters. Appends "2" when no segment qualifies.
std::string AbbreviateName(std::string_view name, int min_len = 6,
                           int keep = 3);

// The golden tool shared by every golden answer. Not-applicable when the
// answers are empty, name several tools, or the tool is missing.
absl::StatusOr<size_t> SingleGoldenToolIndex(const Sample& sample);

// Parameter list with every name moved: rotated by one for two or more
// parameters, suffixed "_arg" for one, and a single "input_arg" for none.
std::vector<std::pair<std::string, ParamSpec>> WrongParameters(
    const ToolSpec& tool);

// variant is one of 'A'..'E'.
absl::StatusOr<Sample> ApplySameName(const Sample& sample, char variant,
                                     uint64_t seed);

// Asks the rewriter for `count` related tools and appends the ones whose
// names are new. Colliding entries are requested again once.
absl::StatusOr<Sample> ApplyRedundant(const Sample& sample, Rewriter& rewriter,
                                      int count, uint64_t seed);

// variant is one of CD, TD, CD_NT, TD_NT, CD_AB, TD_AB. `rewriter` is only
// consulted when config.rewrite_reward_descriptions is set.
absl::StatusOr<Sample> ApplyReward(const Sample& sample,
                                   std::string_view variant,
                                   const PerturbConfig& config,
                                   Rewriter* rewriter, uint64_t seed);

absl::StatusOr<Sample> ApplyObservation(const Sample& sample,
                                        std::string_view type_code,
                                        const PerturbConfig& config,
                                        Rewriter* rewriter, uint64_t seed);

// Copy of the sample tagged with a runtime descriptor; the error itself is
// injected by the runner.
absl::StatusOr<Sample> TagTransition(const Sample& sample,
                                     std::string_view type_code,
                                     uint64_t seed);

// Dispatches on the type code using config.seed.
absl::StatusOr<Sample> ApplyPerturbation(const Sample& sample,
                                         std::string_view type_code,
                                         const PerturbConfig& config,
                                         Rewriter* rewriter);

// True when the type needs a text generator under `config`.
bool NeedsRewriter(std::string_view type_code, const PerturbConfig& config);

// Accepts "all", "all-static", component names, type codes and display
// names, comma separated. Returns codes in canonical order without repeats.
absl::StatusOr<std::vector<std::string>> ResolveTypeSelector(
    std::string_view selector);

struct SuitePlan {
  std::vector<std::string> types;
  std::map<Source, std::set<std::string>> skip;

  bool Skips(Source source, std::string_view type_code) const;
};

// ToolEyes carries no usable registry, so it skips every action and reward
// type.
std::map<Source, std::set<std::string>> DefaultSkipTable();
SuitePlan MakeSuitePlan(std::vector<std::string> types);
absl::Status ValidateSuitePlan(const SuitePlan& plan);

struct SkipEntry {
  std::string sample_id;
  Source source = Source::kBfclV3;
  std::string type_code;
  std::string reason;
};

struct SkipReport {
  // Samples left out because their source skips the type.
  std::map<std::string, std::map<std::string, int64_t>> by_table;
  // Samples the generator rejected as not applicable.
  std::map<std::string, std::map<std::string, int64_t>> not_applicable;
  std::vector<SkipEntry> entries;

  int64_t TotalByTable() const;
  int64_t TotalNotApplicable() const;
};

Json SkipReportToJson(const SkipReport& report);

struct Suite {
  // Keyed by type code; iteration follows plan order through `types`.
  std::vector<std::string> types;
  std::map<std::string, std::vector<Sample>> samples;
  SkipReport skips;

  int64_t TotalPerturbed() const;
};

// Generation errors and transport errors abort the whole suite.
absl::StatusOr<Suite> GenerateSuite(const std::vector<Sample>& clean,
                                    const SuitePlan& plan,
                                    const PerturbConfig& config,
                                    Rewriter* rewriter);

// Writes <type>.jsonl per type, clean.jsonl and skip_report.json. Returns the
// written paths.
absl::StatusOr<std::vector<std::string>> WriteSuite(
    const std::string& dir, const Suite& suite,
    const std::vector<Sample>& clean);

enum class ComposeMode { kFull, kMixed };

const std::string& ComposeModeName(ComposeMode mode);
std::optional<ComposeMode> ParseComposeMode(std::string_view name);

struct TrainingSet {
  std::vector<Sample> train;
  std::vector<Sample> val;
  // Counted over train and val together.
  int64_t clean_rows = 0;
  int64_t perturbed_rows = 0;
  // Train rows only.
  std::map<std::string, int64_t> type_counts;
  SkipReport skips;
};

// Size of the validation split: 2% of n rounded down, at least one.
size_t ValidationSize(size_t n);
// Clean rows in Mixed mode, counted over train and val together.
size_t MixedCleanTarget(size_t n);

absl::StatusOr<TrainingSet> ComposeTrainingSet(const std::vector<Sample>& clean,
                                               ComposeMode mode,
                                               const PerturbConfig& config,
                                               Rewriter* rewriter);

Json TrainingSetSummaryToJson(const TrainingSet& set, ComposeMode mode);

}  // namespace toolrobust

#endif  // TOOLROBUST_PERTURB_H_
