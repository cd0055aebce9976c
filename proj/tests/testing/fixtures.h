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


// Synthetic samples and corpora shared by the unit and acceptance tests.

#ifndef TOOLROBUST_TESTS_TESTING_FIXTURES_H_
#define TOOLROBUST_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "toolrobust/corpus.h"
#include "toolrobust/rng.h"

namespace toolrobust::testing {

struct ParamDef {
  std::string name;
  std::string type = "string";
  std::string description;
  bool required = true;
};

ToolSpec MakeTool(std::string name, std::string description,
                  std::vector<ParamDef> params = {});
ToolCall MakeCall(std::string name, Value::Object parameters = {});
Sample MakeSample(std::string id, Source source, std::string query,
                  std::vector<ToolSpec> tools, std::vector<ToolCall> golden);

// The apibank__level1_101 sample: tools ModifyAlarm, GetUserToken,
// AddAgenda, **Think with GT AddAgenda.
Sample AgendaSample();
// The bfcl_v3__multiple_110 sample: tools get_collectables_in_season,
// mutation_type.find with GT mutation_type.find.
Sample MutationSample();
// The bfcl_v3__multiple_2 sample: GT country_info.capital(country="Brazil").
Sample CapitalSample();

struct CorpusSpec {
  std::map<Source, int> counts;
  // Samples (outside ToolEyes) whose golden answers name two tools.
  int multi_golden = 0;
  // ToolEyes samples whose parameters carry no descriptions.
  int no_param_descriptions = 0;
  uint64_t seed = 1;
};

// 199 samples split 32/74/21/21/51 with 20 two-tool answers and 4 samples
// without parameter descriptions.
CorpusSpec BenchmarkCorpusSpec();

std::vector<Sample> SyntheticCorpus(const CorpusSpec& spec);

// `n` single-answer samples cycling over the four non-ToolEyes sources, every
// static type applicable.
std::vector<Sample> TrainingCorpus(int n, uint64_t seed = 3);

// Random call with identifier-shaped names and keys. Values nest up to two
// levels unless `scalars_only` is set.
ToolCall RandomCall(Rng& rng, bool scalars_only = false);
Value RandomValue(Rng& rng, int depth, bool scalars_only = false);

}  // namespace toolrobust::testing

#endif  // TOOLROBUST_TESTS_TESTING_FIXTURES_H_
