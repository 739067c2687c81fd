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
"""Halving hurdles.

Thresholds follow t_i = (2^i - 1) / (2^(n+1) - 1) * T, which gives every
band [t_i, t_(i+1)) the same expected compute when half of the candidates
stop at each hurdle. A candidate passes a hurdle when its fitness is at most
the median of the fitnesses recorded there so far.
"""

import dataclasses
import logging
import threading
from typing import List, Optional, Tuple

import numpy as np

from ..errors import InvalidSchedule

__all__ = ['HurdleSchedule', 'build_hurdles', 'hurdle_gate']

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class HurdleSchedule:
    total: float
    thresholds: Tuple[float, ...]
    # None keeps the full history, otherwise only the latest entries count
    window: Optional[int] = None
    history: List[List[float]] = dataclasses.field(default_factory=list)

    def __post_init__(self):
        if not self.history:
            self.history = [[] for _ in self.thresholds]
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return len(self.thresholds)

    def expected_budget(self) -> float:
        """Mean budget per candidate when exactly half stop at each hurdle."""
        return (self.n + 1) * self.total / (2**(self.n + 1) - 1)

    def stop_budget(self, reached: int) -> float:
        """Budget consumed by a candidate stopped at hurdle ``reached``."""
        if reached >= self.n:
            return self.total
        return self.thresholds[reached]

    def _window(self, i: int) -> List[float]:
        h = self.history[i]
        return h if self.window is None else h[-self.window:]

    def median(self, i: int) -> Optional[float]:
        with self._lock:
            values = self._window(i)
            return float(np.median(values)) if values else None

    def record(self, i: int, fitness: float):
        with self._lock:
            self.history[i].append(float(fitness))

    def gate(self, i: int, fitness: float) -> bool:
        """Pass iff ``fitness`` <= running median at hurdle ``i``; the
        fitness is recorded either way and an empty history passes."""
        if not 0 <= i < self.n:
            raise IndexError(f"hurdle {i} outside schedule of {self.n}")
        with self._lock:
            values = self._window(i)
            passed = not values or fitness <= float(np.median(values))
            self.history[i].append(float(fitness))
        logger.debug("hurdle %d: fitness %.4f %s", i, fitness,
                     "passes" if passed else "stops")
        return passed

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "total": self.total,
                "thresholds": list(self.thresholds),
                "window": self.window,
                "history": [list(h) for h in self.history],
            }

    @staticmethod
    def from_dict(d: dict) -> 'HurdleSchedule':
        return HurdleSchedule(float(d["total"]), tuple(d["thresholds"]),
                              d.get("window"),
                              [list(h) for h in d["history"]])


def build_hurdles(n: int,
                  total: float,
                  window: Optional[int] = None,
                  resolution: float = 0.0) -> HurdleSchedule:
    """
    Args:
        n: number of hurdles.
        total: maximum budget T of one candidate.
        window: optional sliding window for the running medians.
        resolution: smallest budget difference the trainer can tell apart
            (1 for step budgets); closer thresholds raise InvalidSchedule.
    """
    if n < 0:
        raise ValueError(f"hurdle count must be >= 0, got {n}")
    if total <= 0:
        raise ValueError(f"budget must be positive, got {total}")
    if window is not None and window < 1:
        raise ValueError(f"median window must be >= 1, got {window}")
    denominator = 2.0**(n + 1) - 1.0
    thresholds = tuple((2.0**i - 1.0) / denominator * total
                       for i in range(1, n + 1))
    bounds = (0.0, ) + thresholds + (float(total), )
    gaps = [b - a for a, b in zip(bounds, bounds[1:])]
    if n and (min(gaps) <= 0.0 or min(gaps) < resolution):
        raise InvalidSchedule(
            f"{n} hurdles do not fit a budget of {total}: smallest band "
            f"{min(gaps):.3g} below resolution {resolution}")
    return HurdleSchedule(float(total), thresholds, window)


def hurdle_gate(schedule: HurdleSchedule, i: int, fitness: float) -> bool:
    return schedule.gate(i, fitness)
