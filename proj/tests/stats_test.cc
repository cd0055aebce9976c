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
#include <map>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "toolrobust/rng.h"

namespace toolrobust {
namespace {

using ::testing::HasSubstr;
using ::toolrobust::testing::ExhaustiveBootstrap;

std::vector<double> Binary(int n, int successes) {
  std::vector<double> v(n, 0.0);
  std::fill(v.begin(), v.begin() + successes, 1.0);
  return v;
}

TEST(StatsTest, QuantileInterpolates) {
  std::vector<double> v = {0.0, 1.0, 2.0, 10.0};
  EXPECT_DOUBLE_EQ(Quantile(v, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 1.0), 10.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(Quantile({4.0}, 0.3), 4.0);
}

TEST(StatsTest, BootstrapMatchesExhaustiveOracle) {
  const std::vector<std::vector<double>> kVectors = {
      {0.0, 1.0}, {0.2, 0.9}, {0.0, 0.5, 1.0}, {0.1, 0.4, 0.9}, {1.0, 1.0, 0.0}};
  for (const auto& x : kVectors) {
    Estimate want = ExhaustiveBootstrap(x);
    absl::StatusOr<Estimate> got = BootstrapCi(x, 100000, 17);
    ASSERT_TRUE(got.ok());
    EXPECT_NEAR(got->mean, want.mean, 0.02);
    EXPECT_NEAR(got->halfwidth, want.halfwidth, 0.02);
  }
}

TEST(StatsTest, BinaryVectorOf199) {
  absl::StatusOr<Estimate> e = BootstrapCi(Binary(199, 128), 10000, 0);
  ASSERT_TRUE(e.ok());
  EXPECT_NEAR(e->mean, 0.643, 0.0005);
  EXPECT_NEAR(e->halfwidth, 0.065, 0.01);
}

TEST(StatsTest, RetentionFormula) {
  absl::StatusOr<double> r = Retention(0.643, 0.009, 0.147, 0.331);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r, 0.748, 0.001);
  EXPECT_FALSE(Retention(0.0, 0.1, 0.1, 0.1).ok());
}

TEST(StatsTest, DropArithmetic) {
  absl::StatusOr<Estimate> d =
      ComponentDrop(Binary(199, 128), {Binary(199, 120)}, 1000, 0);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(std::round(d->mean * 1000) / 1000, 0.040);
  EXPECT_DOUBLE_EQ(d->mean, 128.0 / 199 - 120.0 / 199);
}

TEST(StatsTest, DropAveragesTypesUnweighted) {
  absl::StatusOr<Estimate> d = ComponentDrop(
      {1.0, 1.0}, {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0}}, 100, 0);
  ASSERT_TRUE(d.ok());
  EXPECT_DOUBLE_EQ(d->mean, 0.5);
}

TEST(StatsTest, CoverageOnSyntheticBinomials) {
  const int kTrials = 1000;
  const int kN = 100;
  const double kP = 0.6;
  Rng rng(99);
  int covered = 0;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<double> x(kN);
    for (double& v : x) v = rng.UniformReal() < kP ? 1.0 : 0.0;
    Estimate e = *BootstrapCi(x, 1000, static_cast<uint64_t>(t));
    if (std::fabs(e.mean - kP) <= e.halfwidth) ++covered;
  }
  double coverage = static_cast<double>(covered) / kTrials;
  EXPECT_GE(coverage, 0.93);
  EXPECT_LE(coverage, 0.97);
}

TEST(StatsTest, DeterministicAcrossCalls) {
  std::vector<double> x = Binary(50, 20);
  EXPECT_EQ(BootstrapCi(x, 500, 3)->halfwidth, BootstrapCi(x, 500, 3)->halfwidth);
}

TEST(StatsTest, PairedPValue) {
  std::vector<double> a = Binary(100, 90);
  std::vector<double> b = Binary(100, 40);
  absl::StatusOr<double> p = PairedBootstrapPValue(a, b, 2000, 1);
  ASSERT_TRUE(p.ok());
  EXPECT_LT(*p, 0.001);
  EXPECT_EQ(SignificanceMarker(*p), "***");
  absl::StatusOr<double> same = PairedBootstrapPValue(a, a, 2000, 1);
  EXPECT_DOUBLE_EQ(*same, 1.0);
  EXPECT_EQ(SignificanceMarker(0.04), "*");
  EXPECT_EQ(SignificanceMarker(0.009), "**");
  EXPECT_EQ(SignificanceMarker(0.2), "");
  EXPECT_FALSE(PairedBootstrapPValue(a, Binary(99, 1), 10, 1).ok());
}

TEST(StatsTest, RejectsBadInputs) {
  EXPECT_FALSE(BootstrapCi(std::vector<double>{}, 100, 0).ok());
  EXPECT_FALSE(BootstrapCi(std::vector<double>{1.0}, 0, 0).ok());
  ScoreVector v;
  v.entries = {{"a", 0.5}, {"a", 1.0}};
  EXPECT_FALSE(ValidateScoreVector(v).ok());
  v.entries = {{"a", 1.5}};
  EXPECT_FALSE(ValidateScoreVector(v).ok());
}

PredictionRecord Scored(const std::string& id, std::string_view type,
                        double score) {
  PredictionRecord r;
  r.sample_id = id;
  r.perturbation = *MakeDescriptor(type, 0);
  r.score = score;
  return r;
}

std::vector<PredictionRecord> SummaryRecords(int clean_hits, int pert_hits) {
  std::vector<PredictionRecord> out;
  for (int i = 0; i < 40; ++i) {
    std::string id = "s" + std::to_string(i);
    out.push_back(Scored(id, "clean", i < clean_hits ? 1.0 : 0.0));
    for (std::string_view code :
         {"realistic_typos", "same_name_A", "CD", "transient_timeout"}) {
      out.push_back(Scored(id, code, i < pert_hits ? 1.0 : 0.0));
    }
  }
  return out;
}

TEST(SummaryTest, BuildsHeadlineAndRows) {
  SummaryOptions opts;
  opts.model = "m";
  opts.replicates = 500;
  std::vector<PredictionRecord> records = SummaryRecords(30, 20);
  absl::StatusOr<ComponentSummary> s = BuildSummary(records, nullptr, opts);
  ASSERT_TRUE(s.ok()) << s.status();
  ASSERT_TRUE(s->clean.has_value());
  EXPECT_DOUBLE_EQ(s->clean->mean, 0.75);
  EXPECT_EQ(s->clean_n, 40u);
  EXPECT_DOUBLE_EQ(s->delta[Component::kObservation].mean, 0.25);
  EXPECT_DOUBLE_EQ(s->delta[Component::kTransition].mean, 0.25);
  ASSERT_TRUE(s->retention.has_value());
  EXPECT_NEAR(*s->retention, 1 - 0.25 / 0.75, 1e-12);
  EXPECT_EQ(s->types.size(), 4u);
  EXPECT_THAT(SummaryTable(*s), HasSubstr("Retention"));
  Json j = SummaryToJson(*s);
  EXPECT_EQ(j["model"], "m");
}

TEST(SummaryTest, BaselinePValues) {
  SummaryOptions opts;
  opts.replicates = 500;
  std::vector<PredictionRecord> a = SummaryRecords(38, 35);
  std::vector<PredictionRecord> b = SummaryRecords(10, 5);
  absl::StatusOr<ComponentSummary> s = BuildSummary(a, &b, opts);
  ASSERT_TRUE(s.ok()) << s.status();
  ASSERT_TRUE(s->p_values.count("clean"));
  EXPECT_LT(s->p_values.at("clean"), 0.01);
}

TEST(SummaryTest, MissingCleanIsAGap) {
  SummaryOptions opts;
  opts.replicates = 100;
  std::vector<PredictionRecord> records;
  for (int i = 0; i < 5; ++i) {
    records.push_back(Scored("s" + std::to_string(i), "CD", 1.0));
  }
  absl::StatusOr<ComponentSummary> s = BuildSummary(records, nullptr, opts);
  ASSERT_TRUE(s.ok());
  EXPECT_FALSE(s->clean.has_value());
  EXPECT_FALSE(s->retention.has_value());
  EXPECT_FALSE(s->gaps.empty());
}

TEST(SummaryTest, UnscoredRecordRejected) {
  std::vector<PredictionRecord> records = {Scored("a", "clean", 1.0)};
  records[0].score.reset();
  EXPECT_FALSE(BuildSummary(records, nullptr, SummaryOptions()).ok());
}

}  // namespace
}  // namespace toolrobust
