# Copyright 2026 The toolrobust Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python access to the toolrobust parser, scorer, perturbations and CLI."""

import json

from toolrobust import _core

__all__ = [
    "bootstrap_ci",
    "parse_tool_calls",
    "perturb",
    "perturbation_types",
    "retention",
    "run_cli",
    "score",
    "transition_error",
]

bootstrap_ci = _core.bootstrap_ci
perturbation_types = _core.perturbation_types
retention = _core.retention
transition_error = _core.transition_error


def parse_tool_calls(text, source):
  """Returns {"tool_calls": [...], "variant_used": str} for raw model text."""
  return json.loads(_core.parse_tool_calls(text, source))


def score(predicted, golden, source):
  """Scores lists of {"name", "parameters"} dicts under a source's rule."""
  return _core.score(json.dumps(predicted), json.dumps(golden), source)


def perturb(sample, type_code, seed=0, stub_rewriter=False):
  """Applies one perturbation type to a sample dict and returns a new dict."""
  return json.loads(
      _core.perturb(json.dumps(sample), type_code, seed, stub_rewriter))


def run_cli(args):
  """Runs the command-line tool in process; returns (code, stdout, stderr)."""
  return _core.run_cli([str(a) for a in args])
