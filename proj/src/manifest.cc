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


#include "toolrobust/manifest.h"

#include <chrono>
#include <ctime>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "toolrobust/corpus.h"

namespace toolrobust {
namespace {

absl::StatusOr<std::vector<std::string>> StringList(const Json& json,
                                                    const char* key) {
  std::vector<std::string> out;
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) return out;
  if (!it->is_array()) {
    return absl::InvalidArgumentError(absl::StrCat("'", key, "' must be an array"));
  }
  for (const Json& v : *it) {
    if (!v.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", key, "' must hold strings"));
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string StringField(const Json& json, const char* key) {
  auto it = json.find(key);
  return it != json.end() && it->is_string() ? it->get<std::string>() : "";
}

}  // namespace

std::string UtcTimestampNow() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json ManifestToJson(const RunManifest& m) {
  Json out = Json::object();
  out["command"] = m.command;
  out["argv"] = m.argv;
  out["config"] = Json::object();
  for (const auto& [k, v] : m.config) out["config"][k] = v;
  out["seed"] = m.seed;
  out["inputs"] = m.inputs;
  out["outputs"] = m.outputs;
  out["version"] = m.version;
  out["started_at"] = m.started_at;
  out["finished_at"] = m.finished_at;
  return out;
}

absl::StatusOr<RunManifest> ManifestFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("manifest must be an object");
  RunManifest m;
  m.command = StringField(json, "command");
  if (m.command.empty()) return absl::InvalidArgumentError("manifest has no command");
  TR_ASSIGN_OR_RETURN(m.argv, StringList(json, "argv"));
  auto config = json.find("config");
  if (config != json.end() && config->is_object()) {
    for (const auto& [k, v] : config->items()) {
      if (!v.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("config value for '", k, "' must be a string"));
      }
      m.config[k] = v.get<std::string>();
    }
  }
  auto seed = json.find("seed");
  if (seed != json.end() && seed->is_number_unsigned()) {
    m.seed = seed->get<uint64_t>();
  } else if (seed != json.end() && seed->is_number_integer() &&
             seed->get<int64_t>() >= 0) {
    m.seed = static_cast<uint64_t>(seed->get<int64_t>());
  }
  TR_ASSIGN_OR_RETURN(m.inputs, StringList(json, "inputs"));
  TR_ASSIGN_OR_RETURN(m.outputs, StringList(json, "outputs"));
  m.version = StringField(json, "version");
  m.started_at = StringField(json, "started_at");
  m.finished_at = StringField(json, "finished_at");
  return m;
}

absl::Status SaveManifest(const RunManifest& manifest, const std::string& path) {
  return WriteFileAtomically(path, ManifestToJson(manifest).dump(2) + "\n");
}

absl::StatusOr<RunManifest> LoadManifest(const std::string& path) {
  TR_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("'", path, "' is not JSON"));
  }
  return ManifestFromJson(json);
}

absl::StatusOr<std::map<std::string, std::string>> ParseKeyValueConfig(
    std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  std::string copy(text);
  for (absl::string_view line : absl::StrSplit(copy, '\n')) {
    ++line_no;
    absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    size_t eq = trimmed.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(trimmed.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(trimmed.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": empty key"));
    }
    if (!out.emplace(key, value).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": duplicate key '", key, "'"));
    }
  }
  return out;
}

absl::StatusOr<std::map<std::string, std::string>> LoadKeyValueConfig(
    const std::string& path) {
  TR_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseKeyValueConfig(text);
}

}  // namespace toolrobust
