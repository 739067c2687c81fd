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
import logging
from typing import List, Optional

import numpy as np
import torch

from ..errors import NumericOverflow
from ..layers.autograd import Tape
from ..layers.modeling_block import CompiledGraph

__all__ = ['CausalityViolation', 'CausalityReport', 'verify_causality']

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class CausalityViolation:
    trial: int
    perturbed: int
    # earliest output position that moved
    position: int
    node: Optional[int]
    site: str
    label: str


@dataclasses.dataclass
class CausalityReport:
    trials: int
    skipped: int = 0
    violations: List[CausalityViolation] = dataclasses.field(
        default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[CausalityViolation]:
        return self.violations[0] if self.violations else None


def _earliest_change(a: torch.Tensor, b: torch.Tensor, before: int) -> int:
    rows = (a[:, :before] != b[:, :before]).flatten(start_dim=2).any(-1)
    return int(torch.nonzero(rows.any(0))[0])


def _locate(clean: Tape, dirty: Tape, before: int):
    """First node in tape order whose output moved at a position < before."""
    for x, y in zip(clean, dirty):
        if x.output.dim() == 3 and \
                not torch.equal(x.output[:, :before], y.output[:, :before]):
            return x
    return None


def verify_causality(graph: CompiledGraph,
                     trials: int = 100,
                     seed: int = 0,
                     batch: Optional[int] = None) -> CausalityReport:
    """Perturbs one random position j of a random input and checks every
    output position before j is bit-identical.

    Trials whose forward pass overflows are counted as skipped.
    """
    rng = np.random.default_rng(seed)
    batch = batch or graph.config.batch
    seq, width = graph.seq_len, graph.d_model
    report = CausalityReport(trials)
    if seq < 2:
        return report
    with torch.no_grad():
        for trial in range(trials):
            x = torch.from_numpy(rng.standard_normal((batch, seq, width)))
            j = int(rng.integers(1, seq))
            b = int(rng.integers(batch))
            x2 = x.clone()
            x2[b, j] += torch.from_numpy(rng.standard_normal(width))
            clean, dirty = Tape(), Tape()
            try:
                y1 = graph(x, clean)
                y2 = graph(x2, dirty)
            except NumericOverflow as e:
                logger.debug("causality trial %d skipped: %s", trial, e)
                report.skipped += 1
                continue
            if torch.equal(y1[:, :j], y2[:, :j]):
                continue
            culprit = _locate(clean, dirty, j)
            report.violations.append(
                CausalityViolation(
                    trial, j, _earliest_change(y1, y2, j),
                    None if culprit is None else culprit.node,
                    "" if culprit is None else culprit.site,
                    "" if culprit is None else culprit.label))
    if report.violations:
        first = report.first_violation
        logger.warning(
            "%d of %d causality trials failed; first at node %s (%s %s)",
            len(report.violations), trials, first.node, first.label,
            first.site)
    return report
