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
from collections import deque
from typing import Iterator, List, Optional

import numpy as np

from ..program.dna import Dna
from ..training.record import FitnessRecord

__all__ = ['Individual', 'Population']


@dataclasses.dataclass(frozen=True)
class Individual:
    candidate_id: int
    dna: Dna
    record: FitnessRecord

    @property
    def fitness(self) -> float:
        return self.record.fitness


class Population:
    """Aging population: the newest ``capacity`` individuals, oldest first."""
    def __init__(self, capacity: int, members=()):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._members = deque(members, maxlen=capacity)

    def __len__(self):
        return len(self._members)

    def __iter__(self) -> Iterator[Individual]:
        return iter(self._members)

    def add(self, individual: Individual) -> Optional[Individual]:
        """Appends ``individual``; returns the evicted oldest member."""
        evicted = self._members[0] \
            if len(self._members) == self.capacity else None
        self._members.append(individual)
        return evicted

    def sample(self, rng: np.random.Generator, k: int) -> List[Individual]:
        if not self._members:
            raise ValueError("cannot sample an empty population")
        k = min(k, len(self._members))
        picked = rng.choice(len(self._members), size=k, replace=False)
        return [self._members[int(i)] for i in picked]

    def tournament(self, rng: np.random.Generator, k: int) -> Individual:
        """Best fitness among ``k`` uniform draws; ties go to the newest."""
        contestants = self.sample(rng, k)
        return min(contestants,
                   key=lambda ind: (ind.fitness, -ind.candidate_id))

    def best(self) -> Individual:
        return min(self._members,
                   key=lambda ind: (ind.fitness, -ind.candidate_id))
