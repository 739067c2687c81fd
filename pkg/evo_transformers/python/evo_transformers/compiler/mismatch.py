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
import enum
from typing import Sequence

import numpy as np

__all__ = ['Resolution', 'MismatchPlan', 'resolve_mismatch']


class Resolution(enum.Enum):
    NONE = 0
    # rhs of width 1 from a keep-dims reduction
    BROADCAST = 1
    ADAPT_LHS = 2
    ADAPT_RHS = 3


@dataclasses.dataclass(frozen=True)
class MismatchPlan:
    resolution: Resolution
    lhs_width: int
    rhs_width: int
    width: int

    @property
    def adapted_width(self) -> int:
        """Width of the operand that gets an adapter before adaptation."""
        if self.resolution is Resolution.ADAPT_LHS:
            return self.lhs_width
        if self.resolution is Resolution.ADAPT_RHS:
            return self.rhs_width
        return self.width

    @property
    def adapter(self) -> str:
        if self.adapted_width > self.width:
            return "truncate"
        if self.adapted_width < self.width:
            return "tile"
        return "none"


def resolve_mismatch(lhs_width: int,
                     rhs_width: int,
                     site_key: Sequence[int],
                     allow_broadcast: bool = True) -> MismatchPlan:
    """Decides how two operands of different channel width are reconciled.

    A generator seeded by ``site_key`` (lineage seed, subprogram, instruction)
    picks the side to adapt, so one site always resolves the same way.
    """
    if lhs_width == rhs_width:
        return MismatchPlan(Resolution.NONE, lhs_width, rhs_width, lhs_width)
    if allow_broadcast and rhs_width == 1:
        return MismatchPlan(Resolution.BROADCAST, lhs_width, rhs_width,
                            lhs_width)
    rng = np.random.default_rng([abs(int(k)) for k in site_key])
    if rng.integers(2) == 1:
        return MismatchPlan(Resolution.ADAPT_RHS, lhs_width, rhs_width,
                            lhs_width)
    return MismatchPlan(Resolution.ADAPT_LHS, lhs_width, rhs_width, rhs_width)
