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


#include "testing/oracles.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "toolrobust/scoring.h"

namespace toolrobust::testing {
namespace {

// A three-value domain with hand-written equivalence classes for each notion
// of equality the scorers use.
struct Domain {
  std::array<Value, 3> values;
  std::array<int, 3> typed_class;
  std::array<int, 3> lenient_class;
  std::array<int, 3> subset_class;
};

const std::vector<Domain>& Domains() {
  static const std::vector<Domain> kDomains = {
      {{Value(1), Value(1.0), Value("a")}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}},
      {{Value(1), Value("1.0"), Value(" Abc ")}, {0, 1, 2}, {0, 0, 2},
       {0, 1, 2}},
      {{Value("abc"), Value(" ABC"), Value("x  y")}, {0, 1, 2}, {0, 0, 2},
       {0, 0, 2}},
  };
  return kDomains;
}

const std::array<std::string, 3> kNames = {"A", "B", "C"};
const std::array<std::string, 2> kKeys = {"p", "q"};

// Calls are encoded as (name, slot per key) with slot -1 for an absent key.
struct Enc {
  int name;
  std::array<int, 2> slot;
};

std::vector<Enc> AllEncodings() {
  std::vector<Enc> out;
  for (int n = 0; n < 3; ++n) {
    for (int a = -1; a < 3; ++a) {
      for (int b = -1; b < 3; ++b) out.push_back({n, {a, b}});
    }
  }
  return out;
}

ToolCall Decode(const Enc& e, const Domain& d) {
  ToolCall c;
  c.name = kNames[e.name];
  for (int k = 0; k < 2; ++k) {
    if (e.slot[k] >= 0) c.parameters[kKeys[k]] = d.values[e.slot[k]];
  }
  return c;
}

using ClassOf = std::function<int(int)>;

bool SameKeySet(const Enc& p, const Enc& g) {
  for (int k = 0; k < 2; ++k) {
    if ((p.slot[k] >= 0) != (g.slot[k] >= 0)) return false;
  }
  return true;
}

// Every golden key present in the prediction with an equivalent value.
bool CoversGolden(const Enc& p, const Enc& g, const ClassOf& cls) {
  for (int k = 0; k < 2; ++k) {
    if (g.slot[k] < 0) continue;
    if (p.slot[k] < 0 || cls(p.slot[k]) != cls(g.slot[k])) return false;
  }
  return true;
}

double OracleBfcl(const std::vector<Enc>& p, const std::vector<Enc>& g,
                  const Domain& d) {
  if (g.empty() || p.size() < g.size()) return 0;
  ClassOf cls = [&](int s) { return d.typed_class[s]; };
  for (size_t i = 0; i < g.size(); ++i) {
    if (p[i].name != g[i].name || !CoversGolden(p[i], g[i], cls)) return 0;
  }
  return 1;
}

double OracleFirstCall(const std::vector<Enc>& p, const std::vector<Enc>& g,
                       const ClassOf& cls) {
  if (g.empty() || p.empty()) return 0;
  if (p[0].name != g[0].name || !SameKeySet(p[0], g[0])) return 0;
  return CoversGolden(p[0], g[0], cls) ? 1 : 0;
}

double OracleToolAlpaca(const std::vector<Enc>& p, const std::vector<Enc>& g,
                        const Domain& d) {
  if (g.empty()) return 0;
  for (const Enc& gc : g) {
    bool found = false;
    for (const Enc& pc : p) {
      if (pc.name != gc.name) continue;
      bool all = true;
      for (int gs : gc.slot) {
        if (gs < 0) continue;
        bool hit = false;
        for (int ps : pc.slot) {
          if (ps >= 0 && d.subset_class[ps] == d.subset_class[gs]) hit = true;
        }
        all = all && hit;
      }
      found = found || all;
    }
    if (!found) return 0;
  }
  return 1;
}

// Longest common subsequence of names by enumerating golden subsets.
double OracleToolEyes(const std::vector<Enc>& p, const std::vector<Enc>& g) {
  if (g.empty()) return 0;
  size_t best = 0;
  for (unsigned mask = 0; mask < (1u << g.size()); ++mask) {
    std::vector<int> sub;
    for (size_t i = 0; i < g.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(g[i].name);
    }
    size_t j = 0;
    for (const Enc& pc : p) {
      if (j < sub.size() && pc.name == sub[j]) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return static_cast<double>(best) / static_cast<double>(g.size());
}

double Oracle(Source s, const std::vector<Enc>& p, const std::vector<Enc>& g,
              const Domain& d) {
  switch (s) {
    case Source::kBfclV3:
      return OracleBfcl(p, g, d);
    case Source::kApiBank:
      return OracleFirstCall(p, g, [&](int x) { return d.lenient_class[x]; });
    case Source::kRotBench:
      return OracleFirstCall(p, g, [&](int x) { return d.typed_class[x]; });
    case Source::kToolAlpaca:
      return OracleToolAlpaca(p, g, d);
    case Source::kToolEyes:
      return OracleToolEyes(p, g);
  }
  return -1;
}

std::vector<ToolCall> DecodeAll(const std::vector<Enc>& encs, const Domain& d) {
  std::vector<ToolCall> out;
  for (const Enc& e : encs) out.push_back(Decode(e, d));
  return out;
}

}  // namespace

OracleComparison CompareScorerWithOracle(Source source) {
  std::vector<Enc> calls = AllEncodings();
  std::vector<std::vector<Enc>> short_lists = {{}};
  std::vector<std::vector<Enc>> long_lists = {{}};
  for (const Enc& a : calls) {
    short_lists.push_back({a});
    long_lists.push_back({a});
    for (const Enc& b : calls) long_lists.push_back({a, b});
  }
  OracleComparison result;
  for (const Domain& d : Domains()) {
    auto check = [&](const std::vector<Enc>& p, const std::vector<Enc>& g) {
      double want = Oracle(source, p, g, d);
      double got = Score(DecodeAll(p, d), DecodeAll(g, d), source);
      ++result.cases;
      if (std::fabs(want - got) > 1e-12) ++result.mismatches;
    };
    for (const auto& g : short_lists) {
      for (const auto& p : long_lists) check(p, g);
    }
    for (const auto& g : long_lists) {
      if (g.size() != 2) continue;
      for (const auto& p : short_lists) check(p, g);
    }
  }
  return result;
}

OracleComparison CheckSelfScore(Source source) {
  std::vector<Enc> calls = AllEncodings();
  OracleComparison result;
  for (const Domain& d : Domains()) {
    for (const Enc& a : calls) {
      for (const Enc& b : calls) {
        std::vector<ToolCall> g = DecodeAll({a, b}, d);
        ++result.cases;
        if (Score(g, g, source) != 1.0) ++result.mismatches;
      }
    }
  }
  return result;
}

Estimate ExhaustiveBootstrap(const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<double> means;
  std::vector<size_t> idx(n, 0);
  while (true) {
    double sum = 0;
    for (size_t i : idx) sum += x[i];
    means.push_back(sum / static_cast<double>(n));
    size_t k = 0;
    while (k < n && ++idx[k] == n) idx[k++] = 0;
    if (k == n) break;
  }
  std::sort(means.begin(), means.end());
  auto inverse_cdf = [&](double q) {
    size_t pos = static_cast<size_t>(std::ceil(q * means.size())) - 1;
    return means[pos];
  };
  double mean = 0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  return {mean, (inverse_cdf(0.975) - inverse_cdf(0.025)) / 2};
}

}  // namespace toolrobust::testing
