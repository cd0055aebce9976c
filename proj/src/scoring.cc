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


#include "toolrobust/scoring.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/ascii.h"

namespace toolrobust {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string CollapseLower(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : Trim(s)) {
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(absl::ascii_tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<double> NumericView(const Value& v) {
  if (v.is_number()) return v.as_number();
  if (v.is_string()) {
    std::optional<Value> lit = ParseLiteralExact(Trim(v.as_string()));
    if (lit.has_value() && lit->is_number()) return lit->as_number();
  }
  return std::nullopt;
}

bool LenientEqual(const Value& a, const Value& b) {
  std::optional<double> na = NumericView(a);
  std::optional<double> nb = NumericView(b);
  if (na.has_value() && nb.has_value()) return NumericEqual(*na, *nb);
  if (a.is_string() && b.is_string()) {
    return absl::AsciiStrToLower(std::string(Trim(a.as_string()))) ==
           absl::AsciiStrToLower(std::string(Trim(b.as_string())));
  }
  if (a.is_array() && b.is_array()) {
    const Value::Array& x = a.as_array();
    const Value::Array& y = b.as_array();
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
      if (!LenientEqual(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_object() && b.is_object()) {
    const Value::Object& x = a.as_object();
    const Value::Object& y = b.as_object();
    if (x.size() != y.size()) return false;
    for (const auto& [k, v] : x) {
      auto it = y.find(k);
      if (it == y.end() || !LenientEqual(v, it->second)) return false;
    }
    return true;
  }
  return a == b;
}

bool SameKeys(const Value::Object& a, const Value::Object& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    if (b.find(k) == b.end()) return false;
  }
  return true;
}

std::set<std::string> ValueSet(const Value::Object& params) {
  std::set<std::string> out;
  for (const auto& [k, v] : params) out.insert(NormalizeForSubset(v));
  return out;
}

}  // namespace

bool NumericEqual(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

bool TypedEqual(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    return NumericEqual(a.as_number(), b.as_number());
  }
  if (a.kind() != b.kind()) return false;
  if (a.is_array()) {
    const Value::Array& x = a.as_array();
    const Value::Array& y = b.as_array();
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
      if (!TypedEqual(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_object()) {
    const Value::Object& x = a.as_object();
    const Value::Object& y = b.as_object();
    if (x.size() != y.size()) return false;
    for (const auto& [k, v] : x) {
      auto it = y.find(k);
      if (it == y.end() || !TypedEqual(v, it->second)) return false;
    }
    return true;
  }
  return a == b;
}

std::string NormalizeForSubset(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::kString:
      return CollapseLower(v.as_string());
    case Value::Kind::kInt:
      return std::to_string(v.as_int());
    case Value::Kind::kReal: {
      double d = v.as_real();
      if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.0e15) {
        return std::to_string(static_cast<int64_t>(d));
      }
      return FormatReal(d);
    }
    case Value::Kind::kBool:
      return v.as_bool() ? "true" : "false";
    case Value::Kind::kNull:
      return "null";
    default:
      return CollapseLower(ToJsonString(v));
  }
}

double ScoreBfcl(const std::vector<ToolCall>& predicted,
                 const std::vector<ToolCall>& golden) {
  if (golden.empty() || predicted.size() < golden.size()) return 0.0;
  for (size_t i = 0; i < golden.size(); ++i) {
    if (predicted[i].name != golden[i].name) return 0.0;
    for (const auto& [k, v] : golden[i].parameters) {
      auto it = predicted[i].parameters.find(k);
      if (it == predicted[i].parameters.end() || !TypedEqual(v, it->second)) {
        return 0.0;
      }
    }
  }
  return 1.0;
}

double ScoreApiBank(const std::vector<ToolCall>& predicted,
                    const std::vector<ToolCall>& golden) {
  if (golden.empty() || predicted.empty()) return 0.0;
  const ToolCall& p = predicted.front();
  const ToolCall& g = golden.front();
  if (p.name != g.name || !SameKeys(p.parameters, g.parameters)) return 0.0;
  for (const auto& [k, v] : g.parameters) {
    if (!LenientEqual(v, p.parameters.at(k))) return 0.0;
  }
  return 1.0;
}

double ScoreRotBench(const std::vector<ToolCall>& predicted,
                     const std::vector<ToolCall>& golden) {
  if (golden.empty() || predicted.empty()) return 0.0;
  const ToolCall& p = predicted.front();
  const ToolCall& g = golden.front();
  if (p.name != g.name || !SameKeys(p.parameters, g.parameters)) return 0.0;
  for (const auto& [k, v] : g.parameters) {
    if (!TypedEqual(v, p.parameters.at(k))) return 0.0;
  }
  return 1.0;
}

double ScoreToolAlpaca(const std::vector<ToolCall>& predicted,
                       const std::vector<ToolCall>& golden) {
  if (golden.empty()) return 0.0;
  for (const ToolCall& g : golden) {
    std::set<std::string> want = ValueSet(g.parameters);
    bool found = false;
    for (const ToolCall& p : predicted) {
      if (p.name != g.name) continue;
      std::set<std::string> have = ValueSet(p.parameters);
      if (std::includes(have.begin(), have.end(), want.begin(), want.end())) {
        found = true;
        break;
      }
    }
    if (!found) return 0.0;
  }
  return 1.0;
}

double ScoreToolEyes(const std::vector<ToolCall>& predicted,
                     const std::vector<ToolCall>& golden) {
  if (golden.empty()) return 0.0;
  const size_t n = golden.size();
  const size_t m = predicted.size();
  std::vector<size_t> prev(m + 1, 0);
  std::vector<size_t> cur(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      if (golden[i - 1].name == predicted[j - 1].name) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(n);
}

double Score(const std::vector<ToolCall>& predicted,
             const std::vector<ToolCall>& golden, Source source) {
  switch (source) {
    case Source::kBfclV3:
      return ScoreBfcl(predicted, golden);
    case Source::kApiBank:
      return ScoreApiBank(predicted, golden);
    case Source::kRotBench:
      return ScoreRotBench(predicted, golden);
    case Source::kToolAlpaca:
      return ScoreToolAlpaca(predicted, golden);
    case Source::kToolEyes:
      return ScoreToolEyes(predicted, golden);
  }
  return 0.0;
}

std::optional<ErrorMode> ClassifyErrorMode(std::string_view raw,
                                           const std::vector<ToolCall>& calls,
                                           double score) {
  if (score >= 1.0) return std::nullopt;
  if (Trim(raw).empty()) return ErrorMode::kEmptyToolCall;
  if (calls.empty()) return ErrorMode::kOmittedToolCall;
  return ErrorMode::kWrongCall;
}

ErrorTally TallyErrorModes(const std::vector<PredictionRecord>& records,
                           const RecordFilter& filter) {
  ErrorTally tally;
  for (ErrorMode m : AllErrorModes()) tally.modes[m] = ModeCount();
  for (const PredictionRecord& r : records) {
    if (filter && !filter(r)) continue;
    double score = r.score.value_or(0.0);
    if (score >= 1.0) continue;
    std::optional<ErrorMode> mode = r.error_mode;
    if (!mode.has_value()) mode = ClassifyErrorMode(r.final_raw, r.tool_calls, score);
    ++tally.modes[mode.value_or(ErrorMode::kOther)].count;
    ++tally.failed;
  }
  tally.empty = tally.failed == 0;
  if (!tally.empty) {
    for (auto& [mode, count] : tally.modes) {
      count.fraction = static_cast<double>(count.count) /
                       static_cast<double>(tally.failed);
    }
  }
  return tally;
}

void ScoreRecord(const Sample& sample, PredictionRecord* record) {
  double s = Score(record->tool_calls, sample.golden_answers, sample.source);
  record->score = s;
  record->error_mode = ClassifyErrorMode(record->final_raw, record->tool_calls, s);
}

}  // namespace toolrobust
