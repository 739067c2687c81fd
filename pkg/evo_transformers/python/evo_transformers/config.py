# Copyright (C) 2026 The evo_transformers Authors.
# All rights reserved.
# Licensed under the BSD 3-Clause License (the "License"); you may
# not use this file except in compliance with the License. You may
# obtain a copy of the License at
# https://opensource.org/licenses/BSD-3-Clause
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" basis,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.
# See the AUTHORS file for names of contributors.

import dataclasses
import hashlib
import json
import os
import re
from typing import Any, Dict, Optional, Tuple

__all__ = [
    'DIMS_VOCABULARY', 'BRANCHING_VALUES', 'NUM_CONSTANTS', 'NUM_DIMS',
    'MAX_SCALE_UNIT', 'WIDTH_CAP', 'DEFAULT_PROXY_FRACTION', 'RUN_ROOT_ENV',
    'CompileConfig', 'StackConfig', 'TrainConfig', 'EvalConfig',
    'SearchConfig', 'parse_budget', 'parse_count', 'config_to_dict',
    'config_hash', 'default_run_root'
]

# relative dims a bank may hold
DIMS_VOCABULARY = (1, 2, 4, 8, 12, 16, 24, 32, 48, 64)
BRANCHING_VALUES = (1, 2, 4, 8, 16)
NUM_CONSTANTS = 2
NUM_DIMS = 6

MAX_SCALE_UNIT = 4096
WIDTH_CAP = 8192

# 7 of 24 training hours
DEFAULT_PROXY_FRACTION = 7.0 / 24.0

RUN_ROOT_ENV = "EVO_TRANSFORMERS_RUN_ROOT"

BUDGET_UNITS = ("steps", "seconds")


@dataclasses.dataclass(frozen=True)
class CompileConfig:
    scale_unit: Optional[int] = None
    batch: int = 2
    seq_len: int = 64
    model_dim_units: int = 8
    numeric_guards: bool = True
    causal_shift: bool = True
    width_cap: int = WIDTH_CAP
    seed: int = 0

    @property
    def d_model(self) -> int:
        if self.scale_unit is None:
            raise ValueError("d_model is undefined until a scale unit is set")
        return self.model_dim_units * self.scale_unit

    def with_scale_unit(self, scale_unit: int) -> 'CompileConfig':
        return dataclasses.replace(self, scale_unit=scale_unit)


@dataclasses.dataclass(frozen=True)
class StackConfig:
    n_layers: int = 2
    vocab: int = 256
    tie_embeddings: bool = True

    def __post_init__(self):
        if self.n_layers < 1:
            raise ValueError(f"n_layers must be >= 1, got {self.n_layers}")


@dataclasses.dataclass(frozen=True)
class TrainConfig:
    batch_tokens: int = 4096
    seq_len: int = 64
    budget: float = 500
    budget_unit: str = "steps"
    warmup_steps: int = 50
    peak_lr: float = 0.01
    clip_norm: float = 10.0
    betas: Tuple[float, float] = (0.9, 0.98)
    eps: float = 1e-9
    eval_interval: float = 50
    eval_batches: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.budget_unit not in BUDGET_UNITS:
            raise ValueError(f"unknown budget unit {self.budget_unit!r}")
        if self.batch_tokens < self.seq_len:
            raise ValueError("batch_tokens must cover at least one sequence")
        if self.budget_unit == "steps" and self.warmup_steps > max(
                self.budget, 1):
            raise ValueError(
                f"warmup {self.warmup_steps} exceeds step budget {self.budget}")
        if self.warmup_steps < 1:
            raise ValueError("warmup_steps must be >= 1")

    @property
    def sequences_per_batch(self) -> int:
        return self.batch_tokens // self.seq_len


@dataclasses.dataclass(frozen=True)
class EvalConfig:
    compile: CompileConfig = CompileConfig()
    stack: StackConfig = StackConfig()
    train: TrainConfig = TrainConfig()
    min_params: Optional[int] = None
    max_params: Optional[int] = None

    def __post_init__(self):
        if self.compile.seq_len != self.train.seq_len:
            raise ValueError(
                f"compile seq_len {self.compile.seq_len} differs from train "
                f"seq_len {self.train.seq_len}")
        if (self.min_params is None) != (self.max_params is None):
            raise ValueError("give both min_params and max_params or neither")


@dataclasses.dataclass(frozen=True)
class SearchConfig:
    population_size: int = 100
    tournament_size: int = 10
    candidates: int = 300
    hurdles: int = 4
    proxy_fraction: float = DEFAULT_PROXY_FRACTION
    workers: int = 1
    top_n: int = 10
    median_window: Optional[int] = None
    random_init: bool = False
    max_mutation_attempts: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.tournament_size > self.population_size:
            raise ValueError("tournament larger than population")
        if not 0.0 < self.proxy_fraction <= 1.0:
            raise ValueError("proxy_fraction must be in (0, 1]")


_BUDGET_RE = re.compile(
    r"^\s*([0-9]*\.?[0-9]+)\s*(steps?|s|sec|seconds?|m|min|h|hours?)?\s*$")
_SECONDS = {"s": 1, "sec": 1, "second": 1, "seconds": 1, "m": 60, "min": 60,
            "h": 3600, "hour": 3600, "hours": 3600}


def parse_budget(text: str) -> Tuple[float, str]:
    """Reads "500", "500steps", "300s", "2m" or "7h"; bare numbers are steps."""
    match = _BUDGET_RE.match(text)
    if match is None:
        raise ValueError(f"cannot read budget {text!r}")
    value, unit = float(match.group(1)), match.group(2)
    if unit is None or unit.startswith("step"):
        return value, "steps"
    return value * _SECONDS[unit], "seconds"


_COUNT_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+)\s*([kKmMgG]?)\s*$")
_SUFFIX = {"": 1, "k": 10**3, "m": 10**6, "g": 10**9}


def parse_count(text: str) -> int:
    match = _COUNT_RE.match(text)
    if match is None:
        raise ValueError(f"cannot read count {text!r}")
    return int(round(float(match.group(1)) * _SUFFIX[match.group(2).lower()]))


def config_to_dict(config: Any) -> Dict[str, Any]:
    return dataclasses.asdict(config)


def config_hash(payload: Dict[str, Any]) -> str:
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def default_run_root() -> str:
    return os.environ.get(RUN_ROOT_ENV, "runs")

