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
import math
import os
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidData

__all__ = ['LossCurve', 'COMPUTE_COLUMNS']

COMPUTE_COLUMNS = ("step", "wall_seconds")


@dataclasses.dataclass(frozen=True)
class LossCurve:
    """Validation loss against training compute.

    Compute is positive and strictly increasing, every loss is finite.
    """
    compute: Tuple[float, ...]
    loss: Tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "compute", tuple(float(c)
                                                  for c in self.compute))
        object.__setattr__(self, "loss", tuple(float(v) for v in self.loss))
        if len(self.compute) != len(self.loss):
            raise InvalidData(
                f"{len(self.compute)} compute samples against "
                f"{len(self.loss)} losses")
        if not self.compute:
            raise InvalidData(f"curve {self.label!r} is empty")
        if self.compute[0] <= 0:
            raise InvalidData(
                f"curve {self.label!r} has non-positive compute "
                f"{self.compute[0]:g}")
        if any(b <= a for a, b in zip(self.compute, self.compute[1:])):
            raise InvalidData(
                f"compute of curve {self.label!r} is not strictly increasing")
        if not all(math.isfinite(v) for v in self.loss):
            raise InvalidData(f"curve {self.label!r} has a non-finite loss")

    def __len__(self):
        return len(self.compute)

    @property
    def final_loss(self) -> float:
        return self.loss[-1]

    @property
    def total_compute(self) -> float:
        return self.compute[-1]

    @property
    def best_loss(self) -> float:
        return min(self.loss)

    def scaled(self, factor: float) -> 'LossCurve':
        """Same curve with compute measured in units ``1 / factor``."""
        return LossCurve(tuple(c * factor for c in self.compute), self.loss,
                         self.label)

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.compute), np.asarray(self.loss)

    @staticmethod
    def from_points(points: Sequence[Tuple[float, float]],
                    label: str = "") -> 'LossCurve':
        return LossCurve(tuple(p[0] for p in points),
                         tuple(p[1] for p in points), label)

    @staticmethod
    def from_csv(path: str,
                 compute_column: str = "step",
                 loss_column: str = "valid_loss",
                 label: Optional[str] = None) -> 'LossCurve':
        """Reads a trainer CSV. Rows without positive compute (the sample
        taken before the first update) are skipped."""
        if compute_column not in COMPUTE_COLUMNS:
            raise ValueError(f"compute column must be one of "
                             f"{COMPUTE_COLUMNS}, got {compute_column!r}")
        compute, loss = [], []
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            for row in reader:
                try:
                    c = float(row[compute_column])
                    v = float(row[loss_column])
                except (KeyError, TypeError, ValueError) as e:
                    raise InvalidData(f"{path}: bad row {row}: {e}") from e
                if c > 0:
                    compute.append(c)
                    loss.append(v)
        if label is None:
            label = os.path.splitext(os.path.basename(path))[0]
        return LossCurve(tuple(compute), tuple(loss), label)
