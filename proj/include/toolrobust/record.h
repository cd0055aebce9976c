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


// Per-sample model run record and its JSONL form.
//
//   {"sample_id": "...", "source": "apibank",
//    "perturbation": {"component": "transition", "type": "transient_timeout",
//                     "method": "runtime", "seed": 0},
//    "pass1_raw": "...", "injected_error": "...", "pass2_raw": "...",
//    "final_raw": "...", "tool_calls": [...], "score": 1.0,
//    "error_mode": null, "no_injection": false}

#ifndef TOOLROBUST_RECORD_H_
#define TOOLROBUST_RECORD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/corpus.h"
#include "toolrobust/status.h"

namespace toolrobust {

enum class ErrorMode { kEmptyToolCall, kOmittedToolCall, kWrongCall, kOther };

const std::string& ErrorModeName(ErrorMode mode);
std::optional<ErrorMode> ParseErrorMode(std::string_view name);
const std::vector<ErrorMode>& AllErrorModes();

struct PredictionRecord {
  std::string sample_id;
  Source source = Source::kBfclV3;
  PerturbationDescriptor perturbation;
  std::string pass1_raw;
  std::optional<std::string> injected_error;
  std::optional<std::string> pass2_raw;
  std::string final_raw;
  std::vector<ToolCall> tool_calls;
  std::optional<double> score;
  std::optional<ErrorMode> error_mode;
  bool no_injection = false;
  std::optional<std::string> run_error;

  friend bool operator==(const PredictionRecord&,
                         const PredictionRecord&) = default;
};

Json RecordToJson(const PredictionRecord& record);
absl::StatusOr<PredictionRecord> RecordFromJson(const Json& json);

absl::StatusOr<std::vector<PredictionRecord>> ParseRecords(
    std::string_view contents);
absl::StatusOr<std::vector<PredictionRecord>> LoadRecords(
    const std::string& path);
std::string SerializeRecords(const std::vector<PredictionRecord>& records);
absl::Status SaveRecords(const std::vector<PredictionRecord>& records,
                         const std::string& path);

}  // namespace toolrobust

#endif  // TOOLROBUST_RECORD_H_
