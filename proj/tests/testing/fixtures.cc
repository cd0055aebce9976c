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


#include "testing/fixtures.h"

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "absl/strings/str_cat.h"
#include "toolrobust/rng.h"

namespace toolrobust::testing {
namespace {

constexpr std::array<const char*, 12> kNouns = {
    "weather", "invoice", "flight", "recipe", "account", "ticket",
    "playlist", "meeting", "parcel", "stock", "hotel", "vaccine"};
constexpr std::array<const char*, 8> kVerbs = {
    "get", "search", "create", "update", "cancel", "list", "check", "book"};
constexpr std::array<const char*, 8> kCities = {
    "Paris", "Lagos", "Osaka", "Lima", "Oslo", "Quito", "Hanoi", "Perth"};

std::string ToolName(Source source, int verb, int noun) {
  const char* v = kVerbs[static_cast<size_t>(verb) % kVerbs.size()];
  const char* n = kNouns[static_cast<size_t>(noun) % kNouns.size()];
  switch (source) {
    case Source::kBfclV3:
      return absl::StrCat(n, "_info.", v);
    case Source::kApiBank: {
      std::string a(v), b(n);
      a[0] = static_cast<char>(a[0] - 'a' + 'A');
      b[0] = static_cast<char>(b[0] - 'a' + 'A');
      return a + b;
    }
    default:
      return absl::StrCat(v, "_", n);
  }
}

ToolSpec SyntheticTool(const std::string& name, int noun, bool param_desc) {
  std::string n = kNouns[static_cast<size_t>(noun) % kNouns.size()];
  return MakeTool(
      name, absl::StrCat("Handles ", n, " requests for a given city and day."),
      {{"city", "string", param_desc ? "Name of the city." : "", true},
       {"days", "integer", param_desc ? "Number of days ahead." : "", false}});
}

}  // namespace

ToolSpec MakeTool(std::string name, std::string description,
                  std::vector<ParamDef> params) {
  ToolSpec tool;
  tool.name = std::move(name);
  tool.description = std::move(description);
  for (ParamDef& p : params) {
    ParamSpec spec;
    spec.type_tag = p.type;
    spec.description = p.description;
    spec.required = p.required;
    tool.parameters.emplace_back(p.name, std::move(spec));
  }
  return tool;
}

ToolCall MakeCall(std::string name, Value::Object parameters) {
  return ToolCall{std::move(name), std::move(parameters)};
}

Sample MakeSample(std::string id, Source source, std::string query,
                  std::vector<ToolSpec> tools, std::vector<ToolCall> golden) {
  Sample s;
  s.id = std::move(id);
  s.source = source;
  s.dialog.push_back({Role::kUser, std::move(query)});
  s.tools = std::move(tools);
  s.golden_answers = std::move(golden);
  s.output_format = FormatForSource(source);
  return s;
}

Sample AgendaSample() {
  return MakeSample(
      "apibank__level1_101", Source::kApiBank,
      "Can you help me add an agenda item? The content is \"Lunch with "
      "friends\" and location is \"Restaurant X\".",
      {MakeTool("ModifyAlarm", "Modify an alarm.",
                {{"token", "string", "User token."},
                 {"from_time", "string", "Original time."},
                 {"to_time", "string", "New time."}}),
       MakeTool("GetUserToken", "Get the user token.",
                {{"username", "string", "User name."},
                 {"password", "string", "Password."}}),
       MakeTool("AddAgenda", "Add an agenda item.",
                {{"token", "string", "User token."},
                 {"content", "string", "Agenda content."},
                 {"time", "string", "Agenda time."},
                 {"location", "string", "Agenda location."}}),
       MakeTool("**Think", "Think before acting.")},
      {MakeCall("AddAgenda", {{"token", "p9o8i7u6y5t4r3e2w1q"},
                              {"content", "Lunch with friends"},
                              {"time", "2023-03-24 14:00:00"},
                              {"location", "Restaurant X"}})});
}

Sample MutationSample() {
  return MakeSample(
      "bfcl_v3__multiple_110", Source::kBfclV3,
      "Find the type of gene mutation based on SNP (Single Nucleotide "
      "Polymorphism) ID rs6034464.",
      {MakeTool("get_collectables_in_season",
                "Retrieve a list of collectable items in a specific game "
                "during a specified season.",
                {{"game_name", "string", "Name of the game."},
                 {"season", "string", "The season."}}),
       MakeTool("mutation_type.find",
                "Finds the type of a genetic mutation based on its SNP ID.",
                {{"snp_id", "string", "The ID of the SNP."},
                 {"species", "string", "Species of the organism.", false}})},
      {MakeCall("mutation_type.find",
                {{"snp_id", "rs6034464"}, {"species", "Homo sapiens"}})});
}

Sample CapitalSample() {
  return MakeSample(
      "bfcl_v3__multiple_2", Source::kBfclV3, "What is the capital of Brazil?",
      {MakeTool("country_info.largest_city", "Largest city of a country.",
                {{"country", "string", "Country name."}}),
       MakeTool("country_info.capital", "Capital of a country.",
                {{"country", "string", "Country name."}}),
       MakeTool("country_info.population", "Population of a country.",
                {{"country", "string", "Country name."}})},
      {MakeCall("country_info.capital", {{"country", "Brazil"}})});
}

CorpusSpec BenchmarkCorpusSpec() {
  CorpusSpec spec;
  spec.counts = {{Source::kBfclV3, 32},
                 {Source::kApiBank, 74},
                 {Source::kRotBench, 21},
                 {Source::kToolAlpaca, 21},
                 {Source::kToolEyes, 51}};
  spec.multi_golden = 20;
  spec.no_param_descriptions = 4;
  return spec;
}

std::vector<Sample> SyntheticCorpus(const CorpusSpec& spec) {
  std::vector<Sample> out;
  Rng rng(spec.seed);
  int multi_left = spec.multi_golden;
  int bare_left = spec.no_param_descriptions;
  for (const auto& [source, count] : spec.counts) {
    for (int i = 0; i < count; ++i) {
      int noun = static_cast<int>(rng.Uniform(kNouns.size()));
      int verb = static_cast<int>(rng.Uniform(kVerbs.size()));
      bool multi = source != Source::kToolEyes && multi_left > 0 && i % 3 == 0;
      bool bare = source == Source::kToolEyes && bare_left > 0 && i % 5 == 0;
      if (multi) --multi_left;
      if (bare) --bare_left;
      std::vector<ToolSpec> tools;
      for (int k = 0; k < 3; ++k) {
        tools.push_back(SyntheticTool(ToolName(source, verb + k, noun + k),
                                      noun + k, !bare));
      }
      std::string city = kCities[rng.Uniform(kCities.size())];
      int64_t days = static_cast<int64_t>(1 + rng.Uniform(7));
      std::vector<ToolCall> golden = {
          MakeCall(tools[0].name, {{"city", city}, {"days", days}})};
      if (multi) golden.push_back(MakeCall(tools[1].name, {{"city", city}}));
      std::string query = absl::StrCat(
          "Please ", kVerbs[static_cast<size_t>(verb) % kVerbs.size()],
          " the ", kNouns[static_cast<size_t>(noun) % kNouns.size()],
          " details for ", city, " over the next ", days, " days.");
      out.push_back(MakeSample(absl::StrCat(SourceName(source), "__synthetic_", i),
                               source, query, std::move(tools),
                               std::move(golden)));
    }
  }
  return out;
}

std::vector<Sample> TrainingCorpus(int n, uint64_t seed) {
  static constexpr Source kSources[] = {Source::kBfclV3, Source::kApiBank,
                                        Source::kRotBench, Source::kToolAlpaca};
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(n));
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Source source = kSources[i % 4];
    int noun = static_cast<int>(rng.Uniform(kNouns.size()));
    int verb = static_cast<int>(rng.Uniform(kVerbs.size()));
    std::vector<ToolSpec> tools;
    for (int k = 0; k < 3; ++k) {
      tools.push_back(
          SyntheticTool(ToolName(source, verb + k, noun + k), noun + k, true));
    }
    std::string city = kCities[rng.Uniform(kCities.size())];
    std::vector<ToolCall> golden = {MakeCall(tools[0].name, {{"city", city}})};
    out.push_back(MakeSample(
        absl::StrCat("train__", i), source,
        absl::StrCat("Could you check the latest details for ", city, "?"),
        std::move(tools), std::move(golden)));
  }
  return out;
}

namespace {

constexpr std::array<std::string_view, 8> kWords = {
    "get", "weather", "city", "find", "mutation", "type", "x", "Query2"};

std::string RandomIdentifier(Rng& rng) {
  std::string out(kWords[rng.Uniform(kWords.size())]);
  int extra = static_cast<int>(rng.Uniform(3));
  for (int i = 0; i < extra; ++i) {
    absl::StrAppend(&out, "_", std::string(kWords[rng.Uniform(kWords.size())]));
  }
  return out;
}

std::string RandomText(Rng& rng) {
  static constexpr std::array<std::string_view, 16> kPieces = {
      "a", "Z", "7", " ", "\"", "'", "\\", "\n", "\t", "{", "]", "=",
      "&", "?", "\xc3\xa9", "\xe2\x82\xac"};
  std::string out;
  int n = static_cast<int>(rng.Uniform(12));
  for (int i = 0; i < n; ++i) out.append(kPieces[rng.Uniform(kPieces.size())]);
  return out;
}

}  // namespace

Value RandomValue(Rng& rng, int depth, bool scalars_only) {
  uint64_t kinds = (scalars_only || depth <= 0) ? 5 : 7;
  switch (rng.Uniform(kinds)) {
    case 0:
      return Value();
    case 1:
      return Value(rng.Uniform(2) == 1);
    case 2:
      return Value(static_cast<int64_t>(rng.Next() >> rng.Uniform(64)) *
                   (rng.Uniform(2) == 1 ? -1 : 1));
    case 3:
      return Value((rng.UniformReal() - 0.5) *
                   static_cast<double>(1ULL << rng.Uniform(40)));
    case 4:
      return Value(RandomText(rng));
    case 5: {
      Value::Array a;
      int n = static_cast<int>(rng.Uniform(4));
      for (int i = 0; i < n; ++i) a.push_back(RandomValue(rng, depth - 1));
      return Value(std::move(a));
    }
    default: {
      Value::Object o;
      int n = static_cast<int>(rng.Uniform(4));
      for (int i = 0; i < n; ++i) {
        o[RandomText(rng)] = RandomValue(rng, depth - 1);
      }
      return Value(std::move(o));
    }
  }
}

ToolCall RandomCall(Rng& rng, bool scalars_only) {
  ToolCall call;
  call.name = RandomIdentifier(rng);
  if (rng.Uniform(3) == 0) absl::StrAppend(&call.name, ".", RandomIdentifier(rng));
  int n = static_cast<int>(rng.Uniform(4)) + (scalars_only ? 1 : 0);
  for (int i = 0; i < n; ++i) {
    call.parameters[RandomIdentifier(rng)] = RandomValue(rng, 2, scalars_only);
  }
  return call;
}

}  // namespace toolrobust::testing
