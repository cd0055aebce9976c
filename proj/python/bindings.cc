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


#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "pybind11/pybind11.h"
#include "pybind11/stl.h"
#include "toolrobust/cli.h"
#include "toolrobust/corpus.h"
#include "toolrobust/parser.h"
#include "toolrobust/perturb.h"
#include "toolrobust/rewriter.h"
#include "toolrobust/scoring.h"
#include "toolrobust/stats.h"
#include "toolrobust/taxonomy.h"

namespace py = pybind11;

namespace toolrobust {
namespace {

[[noreturn]] void Raise(const absl::Status& status) {
  if (absl::IsInvalidArgument(status) || absl::IsNotFound(status) ||
      absl::IsOutOfRange(status) || absl::IsFailedPrecondition(status)) {
    throw py::value_error(std::string(status.message()));
  }
  throw std::runtime_error(status.ToString());
}

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) Raise(value.status());
  return *std::move(value);
}

Source SourceOrRaise(const std::string& name) {
  std::optional<Source> source = ParseSource(name);
  if (!source) throw py::value_error("unknown source: " + name);
  return *source;
}

Json ParseJsonOrRaise(const std::string& text) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) throw py::value_error("invalid JSON");
  return json;
}

std::vector<ToolCall> CallsFromJson(const std::string& text) {
  Json json = ParseJsonOrRaise(text);
  if (!json.is_array()) throw py::value_error("expected a list of calls");
  std::vector<ToolCall> calls;
  for (const Json& item : json) calls.push_back(Unwrap(ToolCallFromJson(item)));
  return calls;
}

std::string ParseToolCallsJson(const std::string& text,
                               const std::string& source) {
  ParseOutcome out = ParseToolCalls(text, SourceOrRaise(source));
  Json calls = Json::array();
  for (const ToolCall& c : out.tool_calls) calls.push_back(ToolCallToJson(c));
  return Json{{"tool_calls", calls}, {"variant_used", out.variant_used}}.dump();
}

double ScoreJson(const std::string& predicted, const std::string& golden,
                 const std::string& source) {
  return Score(CallsFromJson(predicted), CallsFromJson(golden),
               SourceOrRaise(source));
}

std::string PerturbJson(const std::string& sample_json,
                        const std::string& type_code, uint64_t seed,
                        bool stub_rewriter) {
  Sample sample = Unwrap(SampleFromJson(ParseJsonOrRaise(sample_json)));
  PerturbConfig config;
  config.seed = seed;
  StubRewriter stub;
  Sample out = Unwrap(ApplyPerturbation(sample, type_code, config,
                                        stub_rewriter ? &stub : nullptr));
  return SerializeSample(out);
}

std::tuple<double, double> Bootstrap(const std::vector<double>& scores,
                                     int replicates, uint64_t seed) {
  Estimate e = Unwrap(BootstrapCi(scores, replicates, seed));
  return {e.mean, e.halfwidth};
}

std::vector<py::dict> PerturbationTypes() {
  std::vector<py::dict> out;
  for (const PerturbationType& t : AllPerturbationTypes()) {
    py::dict d;
    d["code"] = std::string(t.code);
    d["display_name"] = std::string(t.display_name);
    d["component"] = ComponentName(t.component);
    d["method"] = MethodName(t.method);
    out.push_back(std::move(d));
  }
  return out;
}

std::tuple<int, std::string, std::string> RunCliCaptured(
    const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(args, out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace
}  // namespace toolrobust

PYBIND11_MODULE(_core, m) {
  using namespace toolrobust;
  m.doc() = "Native bindings for toolrobust.";
  m.def("parse_tool_calls", &ParseToolCallsJson, py::arg("text"),
        py::arg("source"));
  m.def("score", &ScoreJson, py::arg("predicted"), py::arg("golden"),
        py::arg("source"));
  m.def("perturb", &PerturbJson, py::arg("sample"), py::arg("type_code"),
        py::arg("seed") = 0, py::arg("stub_rewriter") = false);
  m.def("bootstrap_ci", &Bootstrap, py::arg("scores"),
        py::arg("replicates") = 10000, py::arg("seed") = 0);
  m.def("retention", [](double clean, double obs, double act, double rew) {
    return Unwrap(Retention(clean, obs, act, rew));
  });
  m.def("transition_error", [](const std::string& code) {
    std::optional<std::string_view> text = TransitionErrorString(code);
    if (!text) throw py::value_error("not a transition type: " + code);
    return std::string(*text);
  });
  m.def("perturbation_types", &PerturbationTypes);
  m.def("run_cli", &RunCliCaptured, py::arg("args"));
}
