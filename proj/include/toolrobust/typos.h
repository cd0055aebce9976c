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


// Offline keyboard-noise generator for the realistic_typos type.

#ifndef TOOLROBUST_TYPOS_H_
#define TOOLROBUST_TYPOS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolrobust/rng.h"

namespace toolrobust {

enum class TypoEdit { kAdjacentKey, kTranspose, kDelete, kDouble };

// Applies 2-4 edits to words made only of ASCII letters, at least four long,
// not glued to digits or identifier punctuation, and not equal
// (case-insensitively) to any entry of `protected_words`. Returns nullopt when
// no word is eligible.
std::optional<std::string> AddOfflineTypos(
    std::string_view text, const std::vector<std::string>& protected_words,
    Rng& rng);

// QWERTY neighbours of a lowercase letter; empty for anything else.
std::string_view AdjacentKeys(char c);

}  // namespace toolrobust

#endif  // TOOLROBUST_TYPOS_H_
