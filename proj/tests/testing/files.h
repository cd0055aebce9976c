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


// Scratch directories and content hashes for tests that touch the disk.

#ifndef TOOLROBUST_TESTS_TESTING_FILES_H_
#define TOOLROBUST_TESTS_TESTING_FILES_H_

#include <cstdint>
#include <map>
#include <string>

namespace toolrobust::testing {

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& prefix);
  ~ScratchDir();

  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::string& path() const { return path_; }
  std::string Join(const std::string& name) const;

 private:
  std::string path_;
};

// FNV-1a of each regular file under `root`, keyed by relative path. Files
// whose names end in "manifest.json" are left out because they carry
// timestamps.
std::map<std::string, uint64_t> HashArtifacts(const std::string& root);

// Same for a single file.
uint64_t HashFile(const std::string& path);

}  // namespace toolrobust::testing

#endif  // TOOLROBUST_TESTS_TESTING_FILES_H_
