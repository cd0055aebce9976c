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

// The fixed perturbation taxonomy: 22 type codes grouped by the component of
// the tool-use loop they disturb, plus the canned transient-error strings
// injected by the transition types.

#ifndef TOOLROBUST_TAXONOMY_H_
#define TOOLROBUST_TAXONOMY_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toolrobust {

enum class Component { kObservation, kAction, kReward, kTransition, kNone };
enum class Method { kRule, kLlm, kRuntime };

const std::string& ComponentName(Component c);
std::optional<Component> ParseComponent(std::string_view name);
const std::string& MethodName(Method m);
std::optional<Method> ParseMethod(std::string_view name);

struct PerturbationType {
  std::string_view code;
  std::string_view display_name;
  Component component;
  Method method;
};

inline constexpr std::string_view kCleanTypeCode = "clean";

// All 22 types in canonical order: 4 observation, 6 action, 6 reward,
// 6 transition.
const std::array<PerturbationType, 22>& AllPerturbationTypes();

const PerturbationType* FindPerturbationType(std::string_view code);
const PerturbationType* FindPerturbationTypeByDisplayName(
    std::string_view display_name);

// The 16 codes that can be baked into static data (everything except the
// transition types), in canonical order.
std::vector<std::string> StaticTypeCodes();
std::vector<std::string> TypeCodesFor(Component component);
bool IsTransitionType(std::string_view code);

// Byte-exact error text a transition type injects as the first tool result.
// Returns nullopt for non-transition codes.
std::optional<std::string_view> TransitionErrorString(std::string_view code);

}  // namespace toolrobust

#endif  // TOOLROBUST_TAXONOMY_H_
