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


// Run manifests and key=value configuration files.
//
// A manifest records how an artifact was produced: the command and its
// arguments, the configuration in effect, inputs, outputs and timestamps.
// Replaying the recorded arguments reproduces the artifact.

#ifndef TOOLROBUST_MANIFEST_H_
#define TOOLROBUST_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/status.h"
#include "toolrobust/value.h"

namespace toolrobust {

inline constexpr char kToolVersion[] = "0.1.0";

struct RunManifest {
  std::string command;
  // Arguments after the program name, as given.
  std::vector<std::string> argv;
  std::map<std::string, std::string> config;
  uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string version = kToolVersion;
  // UTC, e.g. "2026-01-31T12:00:00Z".
  std::string started_at;
  std::string finished_at;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string UtcTimestampNow();

Json ManifestToJson(const RunManifest& manifest);
absl::StatusOr<RunManifest> ManifestFromJson(const Json& json);
absl::Status SaveManifest(const RunManifest& manifest, const std::string& path);
absl::StatusOr<RunManifest> LoadManifest(const std::string& path);

// One "key = value" pair per line. Blank lines and lines starting with '#'
// are ignored; keys and values are trimmed. Duplicate keys are an error.
absl::StatusOr<std::map<std::string, std::string>> ParseKeyValueConfig(
    std::string_view text);
absl::StatusOr<std::map<std::string, std::string>> LoadKeyValueConfig(
    const std::string& path);

}  // namespace toolrobust

#endif  // TOOLROBUST_MANIFEST_H_
