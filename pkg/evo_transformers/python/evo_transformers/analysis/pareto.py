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

import csv
import dataclasses
from typing import List, Sequence

from ..errors import InvalidData

__all__ = ['ParetoPoint', 'dominates', 'pareto_front', 'read_points_csv']


@dataclasses.dataclass(frozen=True)
class ParetoPoint:
    label: str
    inference_seconds: float
    loss: float


def dominates(p: ParetoPoint, q: ParetoPoint) -> bool:
    """``p`` is no worse than ``q`` on both axes and better on one."""
    no_worse = p.inference_seconds <= q.inference_seconds and \
        p.loss <= q.loss
    better = p.inference_seconds < q.inference_seconds or p.loss < q.loss
    return no_worse and better


def pareto_front(points: Sequence[ParetoPoint]) -> List[ParetoPoint]:
    """Non-dominated points in input order."""
    if not points:
        raise InvalidData("a Pareto front needs at least one point")
    return [
        q for q in points if not any(dominates(p, q) for p in points)
    ]


def read_points_csv(path: str) -> List[ParetoPoint]:
    """Rows with ``label``, ``inference_seconds`` and ``loss`` columns."""
    with open(path, newline="") as f:
        try:
            return [
                ParetoPoint(row["label"], float(row["inference_seconds"]),
                            float(row["loss"])) for row in csv.DictReader(f)
            ]
        except (KeyError, ValueError) as e:
            raise InvalidData(f"{path}: {e}") from e
