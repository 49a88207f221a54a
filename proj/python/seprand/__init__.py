# Copyright 2026 The seprand Authors
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

"""Python access to the seprand separator-search core."""

import json
import os

from . import _seprand
from ._seprand import (
    SeprandError,
    classify_transfer,
    context_meta_prompt,
    derive_seed,
    fnv1a64,
    mock_logprob,
    relative_improvement,
    round_half_up,
    sample_random_vocabulary,
)

__all__ = [
    "SeprandError",
    "classify_transfer",
    "context_meta_prompt",
    "curve",
    "derive_seed",
    "effective_ratio",
    "fnv1a64",
    "load_task",
    "mock_logprob",
    "mock_vocabulary",
    "read_run_log",
    "relative_improvement",
    "round_half_up",
    "sample_random_vocabulary",
    "search",
    "select_best",
]


def mock_vocabulary():
    """Tokens and special indices of the mock backend's vocabulary."""
    return json.loads(_seprand.mock_vocabulary_json())


def effective_ratio(records, baseline):
    """Share of records whose accuracy is strictly above the baseline's."""
    return _seprand.effective_ratio_json(json.dumps(records), json.dumps(baseline))


def select_best(records):
    return json.loads(_seprand.select_best_json(json.dumps(records)))


def curve(records):
    """Best-so-far accuracy per iteration."""
    return json.loads(_seprand.curve_json(json.dumps(records)))


def load_task(task_dir, n_train, seed, context_shots=1):
    return json.loads(
        _seprand.load_task_json(os.fspath(task_dir), n_train, seed, context_shots))


def read_run_log(path):
    return json.loads(_seprand.read_run_log_json(os.fspath(path)))


def search(task_dir, strategy, budget, seed=0, n_train=64, context_shots=1,
           backend="mock", opro_per_step=4):
    """Runs a separator search and returns records, best, and curve."""
    return json.loads(
        _seprand.search_json(os.fspath(task_dir), strategy, budget, seed, n_train,
                             context_shots, backend, opro_per_step))
