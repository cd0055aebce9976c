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


// Deterministic random streams. Every draw in the library derives from a
// 64-bit seed through these primitives, so results are identical across
// platforms, standard libraries and thread counts.

#ifndef TOOLROBUST_RNG_H_
#define TOOLROBUST_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace toolrobust {

// 64-bit FNV-1a.
uint64_t StableHash(std::string_view data);
// Order-dependent combination of two 64-bit values.
uint64_t HashCombine(uint64_t a, uint64_t b);

// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t Next();
  // Uniform integer in [0, bound); bound must be > 0.
  uint64_t Uniform(uint64_t bound);
  // Uniform real in [0, 1).
  double UniformReal();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t s_[4];
};

// Stream for one (sample, perturbation type) pair, independent of batch
// composition and order.
Rng SampleRng(uint64_t seed, std::string_view sample_id,
              std::string_view type_code);

// Stream for one bootstrap replicate of one vector.
Rng ReplicateRng(uint64_t seed, uint64_t replicate, uint64_t stream);

}  // namespace toolrobust

#endif  // TOOLROBUST_RNG_H_
