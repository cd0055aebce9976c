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


#include "toolrobust/corpus.h"

#include <filesystem>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"

namespace toolrobust {
namespace {

using ::testing::HasSubstr;
using ::toolrobust::testing::AgendaSample;
using ::toolrobust::testing::BenchmarkCorpusSpec;
using ::toolrobust::testing::MutationSample;
using ::toolrobust::testing::SyntheticCorpus;

TEST(CorpusTest, SourceFormatMapping) {
  EXPECT_EQ(FormatForSource(Source::kBfclV3), OutputFormat::kBfclAst);
  EXPECT_EQ(FormatForSource(Source::kApiBank), OutputFormat::kApiBankXml);
  EXPECT_EQ(FormatForSource(Source::kRotBench), OutputFormat::kReact);
  EXPECT_EQ(FormatForSource(Source::kToolAlpaca),
            OutputFormat::kToolAlpacaMixed);
  EXPECT_EQ(FormatForSource(Source::kToolEyes), OutputFormat::kReactPartial);
  for (Source s : AllSources()) EXPECT_EQ(ParseSource(SourceName(s)), s);
}

TEST(CorpusTest, TypeTags) {
  for (const char* tag :
       {"string", "integer", "number", "boolean", "array", "object", "dict"}) {
    EXPECT_TRUE(IsValidTypeTag(tag)) << tag;
  }
  EXPECT_FALSE(IsValidTypeTag("float"));
}

TEST(CorpusTest, RoundTripsCleanAndTaggedSamples) {
  Sample a = AgendaSample();
  Sample b = MutationSample();
  b.tools.push_back(b.tools.back());
  b.tools.back().parameters.emplace_back("extra", ParamSpec{"integer", "", true});
  b.perturbation = *MakeDescriptor("same_name_C", 7);
  b.perturbation->notes = "wrong params";
  for (const Sample& s : {a, b}) {
    std::string line = SerializeSample(s);
    absl::StatusOr<std::vector<Sample>> back = ParseSamples(line);
    ASSERT_TRUE(back.ok()) << back.status();
    ASSERT_EQ(back->size(), 1u);
    EXPECT_EQ((*back)[0], s);
    EXPECT_EQ(SerializeSample((*back)[0]), line);
  }
}

TEST(CorpusTest, SyntheticCorpusRoundTripsThroughDisk) {
  std::vector<Sample> corpus = SyntheticCorpus(BenchmarkCorpusSpec());
  ASSERT_EQ(corpus.size(), 199u);
  std::string path =
      (std::filesystem::temp_directory_path() / "corpus_test.jsonl").string();
  ASSERT_TRUE(SaveSamples(corpus, path).ok());
  absl::StatusOr<std::vector<Sample>> back = LoadSamples(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, corpus);
  std::filesystem::remove(path);
}

TEST(CorpusTest, ErrorsNameTheLine) {
  std::string good = SerializeSample(AgendaSample());
  absl::StatusOr<std::vector<Sample>> r = ParseSamples(good + "\n\n{oops\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(r.status().message(), HasSubstr("line 3"));

  Json j = SampleToJson(AgendaSample());
  j["source"] = "nowhere";
  r = ParseSamples(good + "\n" + j.dump() + "\n");
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("line 2"));
  EXPECT_THAT(r.status().message(), HasSubstr("nowhere"));
}

TEST(CorpusTest, DuplicateIdsRejected) {
  std::string good = SerializeSample(AgendaSample());
  absl::StatusOr<std::vector<Sample>> r = ParseSamples(good + "\n" + good);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kAlreadyExists);
  EXPECT_THAT(r.status().message(), HasSubstr("line 2"));
}

TEST(CorpusTest, ExpectedSourceEnforced) {
  std::string good = SerializeSample(AgendaSample());
  EXPECT_TRUE(ParseSamples(good, Source::kApiBank).ok());
  EXPECT_FALSE(ParseSamples(good, Source::kBfclV3).ok());
}

TEST(CorpusTest, ValidationRules) {
  Sample s = MutationSample();
  EXPECT_TRUE(ValidateSample(s).ok());

  Sample bad_format = s;
  bad_format.output_format = OutputFormat::kReact;
  EXPECT_FALSE(ValidateSample(bad_format).ok());

  Sample no_user = s;
  no_user.dialog = {{Role::kAssistant, "hi"}};
  EXPECT_FALSE(ValidateSample(no_user).ok());

  Sample dangling = s;
  dangling.golden_answers[0].name = "missing_tool";
  EXPECT_FALSE(ValidateSample(dangling).ok());

  Sample bad_tag = s;
  bad_tag.tools[0].parameters[0].second.type_tag = "float";
  EXPECT_FALSE(ValidateSample(bad_tag).ok());

  Sample bad_descriptor = s;
  bad_descriptor.perturbation = *MakeDescriptor("CD", 1);
  bad_descriptor.perturbation->component = Component::kAction;
  EXPECT_FALSE(ValidateSample(bad_descriptor).ok());
  EXPECT_FALSE(MakeDescriptor("XX", 1).ok());
}

TEST(CorpusTest, FinalUserTurnAndToolIndices) {
  Sample s = AgendaSample();
  s.dialog.push_back({Role::kAssistant, "ok"});
  s.dialog.push_back({Role::kUser, "again"});
  s.dialog.push_back({Role::kAssistant, "sure"});
  EXPECT_EQ(s.FinalUserTurnIndex(), 2u);
  EXPECT_EQ(s.ToolIndices("AddAgenda").size(), 1u);
  EXPECT_EQ(s.TypeCode(), "clean");
}

TEST(CorpusTest, MissingFileIsNotFound) {
  EXPECT_EQ(LoadSamples("/nonexistent/x.jsonl").status().code(),
            absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace toolrobust
