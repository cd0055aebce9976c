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


// The toolrobust command line, callable in-process.
//
//   toolrobust perturb       --in clean.jsonl --out suite/ --types all --seed 7
//   toolrobust run           --suite suite/ --out model.predictions.jsonl
//   toolrobust score         --predictions p.jsonl --suite suite/ --out s.jsonl
//   toolrobust report        --scored s.jsonl --out summary.json
//   toolrobust compose-train --in clean.jsonl --mode full --out train/
//   toolrobust parse         --source bfcl_v3 --text "[f(a=1)]"
//   toolrobust audit         --clean clean.jsonl --perturbed q.jsonl --out a.json
//   toolrobust replay        --manifest suite/manifest.json
//
// Exit codes: 0 success, 1 invalid input, 2 generation or endpoint failure,
// 3 internal error.

#ifndef TOOLROBUST_CLI_H_
#define TOOLROBUST_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "toolrobust/chat_client.h"
#include "toolrobust/perturb.h"
#include "toolrobust/status.h"

namespace toolrobust {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitGeneration = 2;
inline constexpr int kExitInternal = 3;

int ExitCodeFor(const absl::Status& status);

using ConfigMap = std::map<std::string, std::string>;

// Config keys understood by ApplyPerturbConfig / ApplyEndpointConfig. Keys
// outside both sets are rejected; api keys are only read from the
// environment.
absl::Status CheckConfigKeys(const ConfigMap& config);
absl::Status ApplyPerturbConfig(const ConfigMap& config, PerturbConfig* out);
absl::Status ApplyEndpointConfig(const ConfigMap& config, EndpointConfig* out);

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace toolrobust

#endif  // TOOLROBUST_CLI_H_
