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


#include "toolrobust/typos.h"

#include <algorithm>
#include <cctype>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"

namespace toolrobust {
namespace {

struct WordSpan {
  size_t begin;
  size_t end;
};

bool IsAsciiLetter(char c) { return absl::ascii_isalpha(static_cast<unsigned char>(c)); }

bool IsWordish(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return absl::ascii_isalnum(u) || c == '_' || u >= 0x80;
}

// True when the character at `i` ties the neighbouring word to a larger
// token such as an identifier, a number or a path.
bool Glued(std::string_view text, size_t i, int direction) {
  char c = text[i];
  if (IsWordish(c) || c == '@' || c == '/' || c == '\\') return true;
  if (c == '.' || c == '-' || c == ':' || c == '\'') {
    long beyond = static_cast<long>(i) + direction;
    if (beyond >= 0 && beyond < static_cast<long>(text.size()) &&
        IsWordish(text[static_cast<size_t>(beyond)])) {
      return true;
    }
  }
  return false;
}

std::vector<WordSpan> EligibleWords(std::string_view text,
                                    const std::vector<std::string>& protect) {
  std::vector<WordSpan> out;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsAsciiLetter(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsAsciiLetter(text[j])) ++j;
    bool ok = j - i >= 4;
    if (ok && i > 0 && Glued(text, i - 1, -1)) ok = false;
    if (ok && j < text.size() && Glued(text, j, +1)) ok = false;
    if (ok) {
      std::string_view word = text.substr(i, j - i);
      for (const std::string& p : protect) {
        if (absl::EqualsIgnoreCase(std::string(word), p)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back({i, j});
    i = j;
  }
  return out;
}

char MatchCase(char like, char c) {
  return absl::ascii_isupper(static_cast<unsigned char>(like))
             ? absl::ascii_toupper(static_cast<unsigned char>(c))
             : c;
}

void ApplyEdit(std::string& word, Rng& rng) {
  auto edit = static_cast<TypoEdit>(rng.Uniform(4));
  if (edit == TypoEdit::kTranspose) {
    std::vector<size_t> spots;
    for (size_t k = 1; k + 1 < word.size(); ++k) {
      if (absl::ascii_tolower(static_cast<unsigned char>(word[k])) !=
          absl::ascii_tolower(static_cast<unsigned char>(word[k + 1]))) {
        spots.push_back(k);
      }
    }
    if (spots.empty()) {
      edit = TypoEdit::kDouble;
    } else {
      size_t k = spots[rng.Uniform(spots.size())];
      std::swap(word[k], word[k + 1]);
      return;
    }
  }
  if (edit == TypoEdit::kDelete && word.size() <= 2) edit = TypoEdit::kDouble;
  // The first letter stays put so the word remains recognisable.
  size_t k = word.size() > 1 ? 1 + rng.Uniform(word.size() - 1) : 0;
  switch (edit) {
    case TypoEdit::kAdjacentKey: {
      std::string_view keys = AdjacentKeys(
          absl::ascii_tolower(static_cast<unsigned char>(word[k])));
      if (keys.empty()) {
        word.insert(k, 1, word[k]);
      } else {
        word[k] = MatchCase(word[k], keys[rng.Uniform(keys.size())]);
      }
      break;
    }
    case TypoEdit::kDelete:
      word.erase(k, 1);
      break;
    case TypoEdit::kDouble:
    case TypoEdit::kTranspose:
      word.insert(k, 1, word[k]);
      break;
  }
}

std::string Splice(std::string_view text,
                                    const std::vector<WordSpan>& words,
                                    const std::vector<std::string>& replaced) {
  std::string out;
  size_t cursor = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    out.append(text.substr(cursor, words[i].begin - cursor));
    out.append(replaced[i]);
    cursor = words[i].end;
  }
  out.append(text.substr(cursor));
  return out;
}

}  // namespace

std::string_view AdjacentKeys(char c) {
  switch (c) {
    case 'q': return "wa";
    case 'w': return "qes";
    case 'e': return "wrd";
    case 'r': return "etf";
    case 't': return "ryg";
    case 'y': return "tuh";
    case 'u': return "yij";
    case 'i': return "uok";
    case 'o': return "ipl";
    case 'p': return "ol";
    case 'a': return "qsz";
    case 's': return "adwx";
    case 'd': return "sfex";
    case 'f': return "dgrc";
    case 'g': return "fhtv";
    case 'h': return "gjyb";
    case 'j': return "hkun";
    case 'k': return "jlim";
    case 'l': return "ko";
    case 'z': return "xa";
    case 'x': return "zcs";
    case 'c': return "xvd";
    case 'v': return "cbf";
    case 'b': return "vng";
    case 'n': return "bmh";
    case 'm': return "nj";
    default: return {};
  }
}

std::optional<std::string> AddOfflineTypos(
    std::string_view text, const std::vector<std::string>& protected_words,
    Rng& rng) {
  std::vector<WordSpan> words = EligibleWords(text, protected_words);
  if (words.empty()) return std::nullopt;
  size_t edits = 2 + rng.Uniform(3);
  std::vector<size_t> order(words.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  std::vector<std::string> replaced(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    replaced[i] = std::string(text.substr(words[i].begin,
                                          words[i].end - words[i].begin));
  }
  for (size_t e = 0; e < edits; ++e) {
    ApplyEdit(replaced[order[e % order.size()]], rng);
  }
  std::string out = Splice(text, words, replaced);
  if (out == text) {
    std::string& w = replaced[order[0]];
    w.insert(1, 1, w[1]);
    return Splice(text, words, replaced);
  }
  return out;
}

}  // namespace toolrobust
