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


// Percentile-bootstrap estimates over per-sample scores, per-component
// accuracy drops, retention and paired-bootstrap significance.
//
// Quantiles interpolate linearly between order statistics: for sorted
// x[0..n-1] and level q, h = (n - 1) q and the estimate is
// x[floor(h)] + (h - floor(h)) (x[floor(h) + 1] - x[floor(h)]).
// Replicate r of vector k draws from ReplicateRng(seed, r, k), so results do
// not depend on evaluation order.

#ifndef TOOLROBUST_STATS_H_
#define TOOLROBUST_STATS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toolrobust/record.h"
#include "toolrobust/status.h"
#include "toolrobust/taxonomy.h"

namespace toolrobust {

struct ScoreEntry {
  std::string sample_id;
  double score = 0.0;
};

struct ScoreVector {
  std::string model;
  std::string type_code;
  std::vector<ScoreEntry> entries;

  std::vector<double> Scores() const;
  double Mean() const;
};

// Ids unique, scores in [0, 1].
absl::Status ValidateScoreVector(const ScoreVector& v);

struct Estimate {
  double mean = 0.0;
  double halfwidth = 0.0;
};

// Interpolated quantile of an ascending-sorted, non-empty sample.
double Quantile(const std::vector<double>& sorted, double q);

// Mean and (q97.5 - q2.5) / 2 of `replicates` resample means.
absl::StatusOr<Estimate> BootstrapCi(const std::vector<double>& scores,
                                     int replicates, uint64_t seed);
absl::StatusOr<Estimate> BootstrapCi(const ScoreVector& scores,
                                     int replicates, uint64_t seed);

// Clean mean minus the unweighted mean of per-type means; the halfwidth
// resamples every vector independently within each replicate.
absl::StatusOr<Estimate> ComponentDrop(
    const std::vector<double>& clean,
    const std::vector<std::vector<double>>& type_scores, int replicates,
    uint64_t seed);
absl::StatusOr<Estimate> ComponentDrop(
    const ScoreVector& clean, const std::map<std::string, ScoreVector>& per_type,
    Component component, int replicates, uint64_t seed);

// Sample-weighted accuracy over the concatenation of all vectors.
absl::StatusOr<Estimate> PertAcc(
    const std::map<std::string, ScoreVector>& per_type, int replicates,
    uint64_t seed);

// 1 - mean(delta_obs, delta_act, delta_rew) / clean_mean.
absl::StatusOr<double> Retention(double clean_mean, double delta_obs,
                                 double delta_act, double delta_rew);

// Two-sided paired bootstrap on per-sample differences a - b:
// min(1, 2 min(P(mean* <= 0), P(mean* >= 0))).
absl::StatusOr<double> PairedBootstrapPValue(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             int replicates, uint64_t seed);
// Aligns on sample ids; the id sets must be identical.
absl::StatusOr<double> PairedBootstrapPValue(const ScoreVector& a,
                                             const ScoreVector& b,
                                             int replicates, uint64_t seed);

// "***" below 0.001, "**" below 0.01, "*" below 0.05, else "".
std::string SignificanceMarker(double p);

struct TypeRow {
  std::string type_code;
  std::string display_name;
  Component component = Component::kNone;
  size_t n = 0;
  Estimate accuracy;
  // Accuracy minus clean accuracy, when clean scores exist.
  std::optional<Estimate> signed_drop;
};

struct SummaryOptions {
  std::string model;
  int replicates = 10000;
  uint64_t seed = 0;
};

struct ComponentSummary {
  std::string model;
  size_t clean_n = 0;
  std::optional<Estimate> clean;
  size_t pert_n = 0;
  std::optional<Estimate> pert_acc;
  // Keyed by observation, action, reward, transition; absent when the
  // component has no data or there are no clean scores.
  std::map<Component, Estimate> delta;
  std::optional<double> retention;
  // Keyed by "clean", "pert_acc" and component names.
  std::map<std::string, double> p_values;
  std::vector<TypeRow> types;
  // Human-readable notes on missing pieces.
  std::vector<std::string> gaps;
};

// Groups records by perturbation type ("clean" for the clean vector) and
// assembles the summary. With a baseline, p-values compare aligned
// (type, sample) scores. Every record must be scored.
absl::StatusOr<ComponentSummary> BuildSummary(
    const std::vector<PredictionRecord>& records,
    const std::vector<PredictionRecord>* baseline,
    const SummaryOptions& options);

Json SummaryToJson(const ComponentSummary& summary);
// Aligned plain-text table: headline row plus the per-type breakdown.
std::string SummaryTable(const ComponentSummary& summary);

}  // namespace toolrobust

#endif  // TOOLROBUST_STATS_H_
