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


#include "testing/files.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "absl/strings/str_cat.h"
#include "toolrobust/rng.h"

namespace toolrobust::testing {

namespace fs = std::filesystem;

ScratchDir::ScratchDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  fs::path p = fs::temp_directory_path() /
               absl::StrCat("toolrobust_", prefix, "_", ::getpid(), "_",
                            counter++);
  fs::remove_all(p);
  fs::create_directories(p);
  path_ = p.string();
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ScratchDir::Join(const std::string& name) const {
  return (fs::path(path_) / name).string();
}

uint64_t HashFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return StableHash(buf.str());
}

std::map<std::string, uint64_t> HashArtifacts(const std::string& root) {
  std::map<std::string, uint64_t> out;
  for (const fs::directory_entry& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::string name = e.path().filename().string();
    if (name.ends_with("manifest.json")) continue;
    out[fs::relative(e.path(), root).string()] = HashFile(e.path().string());
  }
  return out;
}

}  // namespace toolrobust::testing
