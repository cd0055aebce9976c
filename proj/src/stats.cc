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


#include "toolrobust/stats.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "toolrobust/rng.h"

namespace toolrobust {
namespace {

constexpr Component kDeltaComponents[] = {Component::kObservation,
                                          Component::kAction, Component::kReward,
                                          Component::kTransition};

double MeanOf(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double ResampleMean(const std::vector<double>& v, Rng& rng) {
  const uint64_t n = v.size();
  double sum = 0.0;
  for (uint64_t i = 0; i < n; ++i) sum += v[rng.Uniform(n)];
  return sum / static_cast<double>(n);
}

double Halfwidth(std::vector<double> replicates) {
  std::sort(replicates.begin(), replicates.end());
  double hw = (Quantile(replicates, 0.975) - Quantile(replicates, 0.025)) / 2.0;
  return hw < 0.0 ? 0.0 : hw;
}

uint64_t LabelSeed(uint64_t seed, std::string_view label) {
  return HashCombine(seed, StableHash(label));
}

absl::Status CheckReplicates(int replicates) {
  if (replicates < 1) {
    return absl::InvalidArgumentError("replicate count must be at least 1");
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<double> ScoreVector::Scores() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const ScoreEntry& e : entries) out.push_back(e.score);
  return out;
}

double ScoreVector::Mean() const {
  if (entries.empty()) return 0.0;
  return MeanOf(Scores());
}

absl::Status ValidateScoreVector(const ScoreVector& v) {
  std::set<std::string_view> ids;
  for (const ScoreEntry& e : v.entries) {
    if (!ids.insert(e.sample_id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate sample id '", e.sample_id, "' in score vector"));
    }
    if (!(e.score >= 0.0 && e.score <= 1.0)) {
      return absl::OutOfRangeError(
          absl::StrCat("score for '", e.sample_id, "' lies outside [0, 1]"));
    }
  }
  return absl::OkStatus();
}

double Quantile(const std::vector<double>& sorted, double q) {
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double h = static_cast<double>(n - 1) * q;
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo >= n - 1) return sorted[n - 1];
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

absl::StatusOr<Estimate> BootstrapCi(const std::vector<double>& scores,
                                     int replicates, uint64_t seed) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("bootstrap over an empty score vector");
  }
  TR_RETURN_IF_ERROR(CheckReplicates(replicates));
  std::vector<double> means(replicates);
  for (int r = 0; r < replicates; ++r) {
    Rng rng = ReplicateRng(seed, static_cast<uint64_t>(r), 0);
    means[r] = ResampleMean(scores, rng);
  }
  return Estimate{MeanOf(scores), Halfwidth(std::move(means))};
}

absl::StatusOr<Estimate> BootstrapCi(const ScoreVector& scores,
                                     int replicates, uint64_t seed) {
  TR_RETURN_IF_ERROR(ValidateScoreVector(scores));
  return BootstrapCi(scores.Scores(), replicates, seed);
}

absl::StatusOr<Estimate> ComponentDrop(
    const std::vector<double>& clean,
    const std::vector<std::vector<double>>& type_scores, int replicates,
    uint64_t seed) {
  if (clean.empty()) return absl::InvalidArgumentError("clean score vector is empty");
  if (type_scores.empty()) {
    return absl::InvalidArgumentError("component has no perturbation vectors");
  }
  for (const std::vector<double>& t : type_scores) {
    if (t.empty()) return absl::InvalidArgumentError("perturbation vector is empty");
  }
  TR_RETURN_IF_ERROR(CheckReplicates(replicates));
  auto delta = [&](double clean_mean, const std::vector<double>& type_means) {
    return clean_mean - MeanOf(type_means);
  };
  std::vector<double> type_means;
  for (const std::vector<double>& t : type_scores) type_means.push_back(MeanOf(t));
  double point = delta(MeanOf(clean), type_means);
  std::vector<double> reps(replicates);
  for (int r = 0; r < replicates; ++r) {
    Rng clean_rng = ReplicateRng(seed, static_cast<uint64_t>(r), 0);
    double c = ResampleMean(clean, clean_rng);
    for (size_t k = 0; k < type_scores.size(); ++k) {
      Rng rng = ReplicateRng(seed, static_cast<uint64_t>(r), k + 1);
      type_means[k] = ResampleMean(type_scores[k], rng);
    }
    reps[r] = delta(c, type_means);
  }
  return Estimate{point, Halfwidth(std::move(reps))};
}

absl::StatusOr<Estimate> ComponentDrop(
    const ScoreVector& clean, const std::map<std::string, ScoreVector>& per_type,
    Component component, int replicates, uint64_t seed) {
  TR_RETURN_IF_ERROR(ValidateScoreVector(clean));
  std::vector<std::vector<double>> vectors;
  for (const PerturbationType& t : AllPerturbationTypes()) {
    if (t.component != component) continue;
    auto it = per_type.find(std::string(t.code));
    if (it == per_type.end() || it->second.entries.empty()) continue;
    TR_RETURN_IF_ERROR(ValidateScoreVector(it->second));
    vectors.push_back(it->second.Scores());
  }
  if (vectors.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no score vectors for component ", ComponentName(component)));
  }
  return ComponentDrop(clean.Scores(), vectors, replicates, seed);
}

absl::StatusOr<Estimate> PertAcc(
    const std::map<std::string, ScoreVector>& per_type, int replicates,
    uint64_t seed) {
  std::vector<double> all;
  for (const PerturbationType& t : AllPerturbationTypes()) {
    auto it = per_type.find(std::string(t.code));
    if (it == per_type.end()) continue;
    TR_RETURN_IF_ERROR(ValidateScoreVector(it->second));
    for (const ScoreEntry& e : it->second.entries) all.push_back(e.score);
  }
  for (const auto& [code, v] : per_type) {
    if (FindPerturbationType(code) == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown perturbation type '", code, "'"));
    }
  }
  if (all.empty()) return absl::InvalidArgumentError("no perturbed scores");
  return BootstrapCi(all, replicates, seed);
}

absl::StatusOr<double> Retention(double clean_mean, double delta_obs,
                                 double delta_act, double delta_rew) {
  if (!(clean_mean > 0.0)) {
    return absl::InvalidArgumentError("retention needs a positive clean mean");
  }
  return 1.0 - ((delta_obs + delta_act + delta_rew) / 3.0) / clean_mean;
}

absl::StatusOr<double> PairedBootstrapPValue(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             int replicates, uint64_t seed) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError("paired vectors differ in length");
  }
  if (a.empty()) return absl::InvalidArgumentError("paired vectors are empty");
  TR_RETURN_IF_ERROR(CheckReplicates(replicates));
  std::vector<double> diff(a.size());
  for (size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  int64_t le = 0;
  int64_t ge = 0;
  for (int r = 0; r < replicates; ++r) {
    Rng rng = ReplicateRng(seed, static_cast<uint64_t>(r), 0);
    double m = ResampleMean(diff, rng);
    if (m <= 0.0) ++le;
    if (m >= 0.0) ++ge;
  }
  double tail = static_cast<double>(std::min(le, ge)) / replicates;
  return std::min(1.0, 2.0 * tail);
}

absl::StatusOr<double> PairedBootstrapPValue(const ScoreVector& a,
                                             const ScoreVector& b,
                                             int replicates, uint64_t seed) {
  TR_RETURN_IF_ERROR(ValidateScoreVector(a));
  TR_RETURN_IF_ERROR(ValidateScoreVector(b));
  std::map<std::string_view, double> bmap;
  for (const ScoreEntry& e : b.entries) bmap[e.sample_id] = e.score;
  if (bmap.size() != a.entries.size()) {
    return absl::InvalidArgumentError("paired vectors cover different sample ids");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const ScoreEntry& e : a.entries) {
    auto it = bmap.find(e.sample_id);
    if (it == bmap.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample id '", e.sample_id, "' missing from the paired vector"));
    }
    x.push_back(e.score);
    y.push_back(it->second);
  }
  return PairedBootstrapPValue(x, y, replicates, seed);
}

std::string SignificanceMarker(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

namespace {

struct Grouped {
  ScoreVector clean;
  std::map<std::string, ScoreVector> per_type;
};

absl::StatusOr<Grouped> GroupRecords(const std::vector<PredictionRecord>& records) {
  Grouped g;
  g.clean.type_code = std::string(kCleanTypeCode);
  for (const PredictionRecord& r : records) {
    if (!r.score.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("record '", r.sample_id, "' is not scored"));
    }
    const std::string& code = r.perturbation.type_code;
    if (code == kCleanTypeCode) {
      g.clean.entries.push_back(ScoreEntry{r.sample_id, *r.score});
      continue;
    }
    if (FindPerturbationType(code) == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("record '", r.sample_id, "' has unknown type '", code, "'"));
    }
    ScoreVector& v = g.per_type[code];
    v.type_code = code;
    v.entries.push_back(ScoreEntry{r.sample_id, *r.score});
  }
  TR_RETURN_IF_ERROR(ValidateScoreVector(g.clean));
  for (const auto& [code, v] : g.per_type) TR_RETURN_IF_ERROR(ValidateScoreVector(v));
  return g;
}

ScoreVector Pooled(const Grouped& g, std::optional<Component> component) {
  ScoreVector out;
  for (const PerturbationType& t : AllPerturbationTypes()) {
    if (component.has_value() && t.component != *component) continue;
    auto it = g.per_type.find(std::string(t.code));
    if (it == g.per_type.end()) continue;
    for (const ScoreEntry& e : it->second.entries) {
      out.entries.push_back(ScoreEntry{absl::StrCat(std::string(t.code), "/", e.sample_id), e.score});
    }
  }
  return out;
}

Json EstimateJson(const Estimate& e) {
  Json j = Json::object();
  j["mean"] = e.mean;
  j["halfwidth"] = e.halfwidth;
  return j;
}

std::string FormatEstimate(const std::optional<Estimate>& e) {
  if (!e.has_value()) return "-";
  return absl::StrFormat("%.3f±%.3f", e->mean, e->halfwidth);
}

}  // namespace

absl::StatusOr<ComponentSummary> BuildSummary(
    const std::vector<PredictionRecord>& records,
    const std::vector<PredictionRecord>* baseline,
    const SummaryOptions& options) {
  TR_RETURN_IF_ERROR(CheckReplicates(options.replicates));
  TR_ASSIGN_OR_RETURN(Grouped g, GroupRecords(records));
  const int B = options.replicates;
  const uint64_t seed = options.seed;
  ComponentSummary s;
  s.model = options.model;
  s.clean_n = g.clean.entries.size();
  if (s.clean_n > 0) {
    TR_ASSIGN_OR_RETURN(Estimate e, BootstrapCi(g.clean, B, LabelSeed(seed, "clean")));
    s.clean = e;
  } else {
    s.gaps.push_back("no clean scores: drops and retention are undefined");
  }
  for (const auto& [code, v] : g.per_type) s.pert_n += v.entries.size();
  if (s.pert_n > 0) {
    TR_ASSIGN_OR_RETURN(Estimate e, PertAcc(g.per_type, B, LabelSeed(seed, "pert_acc")));
    s.pert_acc = e;
  } else {
    s.gaps.push_back("no perturbed scores");
  }
  for (Component c : kDeltaComponents) {
    bool has_data = false;
    for (const PerturbationType& t : AllPerturbationTypes()) {
      if (t.component == c && g.per_type.count(std::string(t.code))) has_data = true;
    }
    if (!has_data) {
      s.gaps.push_back(absl::StrCat("no scores for component ", ComponentName(c)));
      continue;
    }
    if (!s.clean.has_value()) continue;
    TR_ASSIGN_OR_RETURN(
        Estimate e,
        ComponentDrop(g.clean, g.per_type, c, B,
                      LabelSeed(seed, absl::StrCat("delta/", ComponentName(c)))));
    s.delta[c] = e;
  }
  if (s.clean.has_value() && s.delta.count(Component::kObservation) &&
      s.delta.count(Component::kAction) && s.delta.count(Component::kReward)) {
    absl::StatusOr<double> r =
        Retention(s.clean->mean, s.delta[Component::kObservation].mean,
                  s.delta[Component::kAction].mean, s.delta[Component::kReward].mean);
    if (r.ok()) {
      s.retention = *r;
    } else {
      s.gaps.push_back("retention undefined: clean accuracy is zero");
    }
  }
  for (const PerturbationType& t : AllPerturbationTypes()) {
    auto it = g.per_type.find(std::string(t.code));
    if (it == g.per_type.end()) continue;
    TypeRow row;
    row.type_code = std::string(t.code);
    row.display_name = std::string(t.display_name);
    row.component = t.component;
    row.n = it->second.entries.size();
    TR_ASSIGN_OR_RETURN(row.accuracy,
                        BootstrapCi(it->second, B, LabelSeed(seed, std::string(t.code))));
    if (s.clean.has_value()) {
      TR_ASSIGN_OR_RETURN(
          Estimate d,
          ComponentDrop(g.clean.Scores(), {it->second.Scores()}, B,
                        LabelSeed(seed, absl::StrCat("drop/", std::string(t.code)))));
      row.signed_drop = Estimate{-d.mean, d.halfwidth};
    }
    s.types.push_back(std::move(row));
  }

  if (baseline != nullptr) {
    TR_ASSIGN_OR_RETURN(Grouped base, GroupRecords(*baseline));
    auto compare = [&](const std::string& key, const ScoreVector& a,
                       const ScoreVector& b) {
      if (a.entries.empty()) return;
      absl::StatusOr<double> p =
          PairedBootstrapPValue(a, b, B, LabelSeed(seed, absl::StrCat("paired/", key)));
      if (p.ok()) {
        s.p_values[key] = *p;
      } else {
        s.gaps.push_back(absl::StrCat("no significance for ", key, ": ",
                                      p.status().message()));
      }
    };
    compare("clean", g.clean, base.clean);
    compare("pert_acc", Pooled(g, std::nullopt), Pooled(base, std::nullopt));
    for (Component c : kDeltaComponents) {
      compare(std::string(ComponentName(c)), Pooled(g, c), Pooled(base, c));
    }
  }
  return s;
}

Json SummaryToJson(const ComponentSummary& s) {
  Json out = Json::object();
  out["model"] = s.model;
  out["clean_n"] = s.clean_n;
  out["clean"] = s.clean.has_value() ? EstimateJson(*s.clean) : Json();
  out["pert_n"] = s.pert_n;
  out["pert_acc"] = s.pert_acc.has_value() ? EstimateJson(*s.pert_acc) : Json();
  Json delta = Json::object();
  for (Component c : kDeltaComponents) {
    auto it = s.delta.find(c);
    delta[std::string(ComponentName(c))] =
        it == s.delta.end() ? Json() : EstimateJson(it->second);
  }
  out["delta"] = std::move(delta);
  out["retention"] = s.retention.has_value() ? Json(*s.retention) : Json();
  Json sig = Json::object();
  for (const auto& [key, p] : s.p_values) {
    Json e = Json::object();
    e["p_value"] = p;
    e["marker"] = SignificanceMarker(p);
    sig[key] = std::move(e);
  }
  out["significance"] = std::move(sig);
  Json types = Json::array();
  for (const TypeRow& row : s.types) {
    Json t = Json::object();
    t["type"] = row.type_code;
    t["display_name"] = row.display_name;
    t["component"] = std::string(ComponentName(row.component));
    t["n"] = row.n;
    t["accuracy"] = EstimateJson(row.accuracy);
    t["signed_drop"] =
        row.signed_drop.has_value() ? EstimateJson(*row.signed_drop) : Json();
    types.push_back(std::move(t));
  }
  out["types"] = std::move(types);
  out["gaps"] = s.gaps;
  return out;
}

std::string SummaryTable(const ComponentSummary& s) {
  auto marker = [&](const std::string& key) {
    auto it = s.p_values.find(key);
    return it == s.p_values.end() ? std::string() : SignificanceMarker(it->second);
  };
  auto delta = [&](Component c) -> std::optional<Estimate> {
    auto it = s.delta.find(c);
    if (it == s.delta.end()) return std::nullopt;
    return it->second;
  };
  std::string out = absl::StrFormat(
      "%-24s %-16s %-16s %-16s %-16s %-16s %-16s %-9s\n", "Model", "Clean",
      "Pert.Acc", "D_Obs", "D_Act", "D_Rew", "D_Trn", "Retention");
  std::string retention =
      s.retention.has_value() ? absl::StrFormat("%.3f", *s.retention) : "-";
  out += absl::StrFormat(
      "%-24s %-16s %-16s %-16s %-16s %-16s %-16s %-9s\n",
      s.model.empty() ? "model" : s.model,
      FormatEstimate(s.clean) + marker("clean"),
      FormatEstimate(s.pert_acc) + marker("pert_acc"),
      FormatEstimate(delta(Component::kObservation)) + marker("observation"),
      FormatEstimate(delta(Component::kAction)) + marker("action"),
      FormatEstimate(delta(Component::kReward)) + marker("reward"),
      FormatEstimate(delta(Component::kTransition)) + marker("transition"),
      retention);
  out += "\n";
  out += absl::StrFormat("%-30s %-14s %-12s %6s %-16s %-16s\n", "Type", "Display",
                         "Component", "N", "Accuracy", "Signed drop");
  for (const TypeRow& row : s.types) {
    out += absl::StrFormat("%-30s %-14s %-12s %6d %-16s %-16s\n", row.type_code,
                           row.display_name, ComponentName(row.component), row.n,
                           FormatEstimate(row.accuracy),
                           FormatEstimate(row.signed_drop));
  }
  for (const std::string& gap : s.gaps) out += absl::StrCat("gap: ", gap, "\n");
  return out;
}

}  // namespace toolrobust
