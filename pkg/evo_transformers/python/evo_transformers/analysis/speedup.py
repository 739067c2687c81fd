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
import math
from typing import Optional

from ..errors import InvalidData, NotReached
from .curves import LossCurve

__all__ = ['Crossing', 'first_crossing', 'speedup_factor', 'speedup_report']


@dataclasses.dataclass(frozen=True)
class Crossing:
    target_loss: float
    compute: float
    baseline_compute: float

    @property
    def factor(self) -> float:
        return self.baseline_compute / self.compute


def first_crossing(curve: LossCurve, target: float) -> Optional[float]:
    """Compute at which ``curve`` first reaches ``target``, interpolated
    linearly in (log c, log l) between the bracketing samples."""
    if target <= 0:
        raise InvalidData(f"target loss must be positive, got {target}")
    for i, (c, loss) in enumerate(zip(curve.compute, curve.loss)):
        if loss > target:
            continue
        if loss == target or i == 0:
            return c
        c0, l0 = curve.compute[i - 1], curve.loss[i - 1]
        if l0 <= 0 or loss <= 0:
            raise InvalidData("log interpolation needs positive losses")
        t = (math.log(target) - math.log(l0)) / (math.log(loss) -
                                                 math.log(l0))
        return math.exp(math.log(c0) + t * (math.log(c) - math.log(c0)))
    return None


def speedup_report(baseline: LossCurve, treatment: LossCurve) -> Crossing:
    target = baseline.final_loss
    compute = first_crossing(treatment, target)
    if compute is None:
        raise NotReached(target, treatment.best_loss)
    return Crossing(target, compute, baseline.total_compute)


def speedup_factor(baseline: LossCurve, treatment: LossCurve) -> float:
    """Baseline compute over the compute the treatment needs to first reach
    the baseline's final loss.

    Raises:
        NotReached: the treatment never gets there.
    """
    return speedup_report(baseline, treatment).factor
