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
import json
import math
from typing import Any, Dict, List, Optional, Sequence

__all__ = [
    'FitnessRecord', 'CurvePoint', 'CURVE_COLUMNS', 'degeneracy_ceiling',
    'write_curve_csv', 'read_curve_csv'
]

CURVE_COLUMNS = ("step", "wall_seconds", "train_loss", "valid_loss")


def degeneracy_ceiling(vocab: int) -> float:
    """Worst recorded loss; anything above it counts as degenerate."""
    return 2.0 * math.log(vocab)


@dataclasses.dataclass(frozen=True)
class FitnessRecord:
    """Outcome of training one candidate.

    ``loss`` is the validation loss in nats per token and ``perplexity`` is
    exactly ``exp(loss)``. Lower fitness is better.
    """
    candidate_id: Optional[int]
    hurdle: int
    steps: int
    wall_seconds: float
    loss: float
    perplexity: float
    degenerate: bool
    stopped_early: bool = False
    parameters: int = 0
    error: str = ""

    @property
    def fitness(self) -> float:
        return self.perplexity

    @staticmethod
    def from_loss(loss: float, **fields) -> 'FitnessRecord':
        return FitnessRecord(loss=loss, perplexity=math.exp(loss), **fields)

    @staticmethod
    def degenerate_record(candidate_id: Optional[int],
                          vocab: int,
                          error: str = "",
                          hurdle: int = 0,
                          steps: int = 0,
                          wall_seconds: float = 0.0,
                          parameters: int = 0) -> 'FitnessRecord':
        return FitnessRecord.from_loss(degeneracy_ceiling(vocab),
                                       candidate_id=candidate_id,
                                       hurdle=hurdle,
                                       steps=steps,
                                       wall_seconds=wall_seconds,
                                       degenerate=True,
                                       parameters=parameters,
                                       error=error)

    def with_candidate(self, candidate_id: int) -> 'FitnessRecord':
        return dataclasses.replace(self, candidate_id=candidate_id)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(d: Dict[str, Any]) -> 'FitnessRecord':
        names = {f.name for f in dataclasses.fields(FitnessRecord)}
        return FitnessRecord(**{k: v for k, v in d.items() if k in names})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclasses.dataclass(frozen=True)
class CurvePoint:
    step: int
    wall_seconds: float
    train_loss: float
    valid_loss: float


def write_curve_csv(path: str, points: Sequence[CurvePoint]):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CURVE_COLUMNS)
        for p in points:
            writer.writerow([
                p.step, f"{p.wall_seconds:.6f}", repr(float(p.train_loss)),
                repr(float(p.valid_loss))
            ])


def read_curve_csv(path: str) -> List[CurvePoint]:
    with open(path, newline="") as f:
        return [
            CurvePoint(int(row["step"]), float(row["wall_seconds"]),
                       float(row["train_loss"]), float(row["valid_loss"]))
            for row in csv.DictReader(f)
        ]
