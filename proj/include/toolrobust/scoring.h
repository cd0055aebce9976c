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


// Deterministic per-source scorers and the error-mode classifier.
//
//   bfcl_v3     1 iff every golden call has a predicted call at the same index
//               with the same name and equal values for every golden
//               parameter; extra predicted calls and parameters are ignored.
//   apibank     1 iff the first predicted call has the golden name and the
//               same parameter keys, strings equal case-insensitively after
//               trimming and numerics (including numeric strings) equal.
//   rotbench    1 iff the first predicted call has the golden name and a
//               field-by-field equal argument map.
//   toolalpaca  1 iff every golden call has a same-name predicted call whose
//               normalised value set contains every golden value.
//   tooleyes    longest common subsequence of call names / golden calls.

#ifndef TOOLROBUST_SCORING_H_
#define TOOLROBUST_SCORING_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/corpus.h"
#include "toolrobust/record.h"

namespace toolrobust {

// |a - b| <= 1e-9 * max(1, |a|, |b|).
bool NumericEqual(double a, double b);
// Structural equality where int and real compare numerically.
bool TypedEqual(const Value& a, const Value& b);
// Lowercased, trimmed, whitespace-collapsed rendering; integral reals print
// as integers.
std::string NormalizeForSubset(const Value& v);

double ScoreBfcl(const std::vector<ToolCall>& predicted,
                 const std::vector<ToolCall>& golden);
double ScoreApiBank(const std::vector<ToolCall>& predicted,
                    const std::vector<ToolCall>& golden);
double ScoreRotBench(const std::vector<ToolCall>& predicted,
                     const std::vector<ToolCall>& golden);
double ScoreToolAlpaca(const std::vector<ToolCall>& predicted,
                       const std::vector<ToolCall>& golden);
double ScoreToolEyes(const std::vector<ToolCall>& predicted,
                     const std::vector<ToolCall>& golden);

// Returns 0 for an empty golden list.
double Score(const std::vector<ToolCall>& predicted,
             const std::vector<ToolCall>& golden, Source source);

// Nullopt when score >= 1; otherwise the first matching rule of
// empty -> omitted -> wrong_call.
std::optional<ErrorMode> ClassifyErrorMode(std::string_view raw,
                                           const std::vector<ToolCall>& calls,
                                           double score);

struct ModeCount {
  size_t count = 0;
  double fraction = 0.0;
};

struct ErrorTally {
  // Every mode is present, zero-filled.
  std::map<ErrorMode, ModeCount> modes;
  size_t failed = 0;
  bool empty = true;
};

using RecordFilter = std::function<bool(const PredictionRecord&)>;

// Counts records with score < 1 that pass `filter` (all when null). Records
// without a stored mode are classified on the fly.
ErrorTally TallyErrorModes(const std::vector<PredictionRecord>& records,
                           const RecordFilter& filter = nullptr);

// Fills score and error_mode from the record's tool calls and final text.
void ScoreRecord(const Sample& sample, PredictionRecord* record);

}  // namespace toolrobust

#endif  // TOOLROBUST_SCORING_H_
