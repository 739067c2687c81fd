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
"""Reverse-mode differentiation over recorded kernel applications.

Kernels run on torch tensors, so the Tape records what was applied and torch
propagates the adjoints. Subgradients at kinks follow the kernels' masked
formulations: SIGN gives 0, ABS gives sign(x) (0 at 0), MAX(x, C) gives the
indicator of x > C and guarded RECIP/DIVIDE points give 0.
"""

import collections.abc
import dataclasses
import logging
import math
from typing import (Callable, Dict, Iterable, Iterator, List, Mapping,
                    Optional, Sequence, Tuple)

import numpy as np
import torch

from ..errors import ContractViolation, NumericOverflow

__all__ = [
    'TapeEntry', 'Tape', 'GradientSet', 'backward', 'GradCheckReport',
    'grad_check', 'LOSS_LABEL'
]

logger = logging.getLogger(__name__)

LOSS_LABEL = "LOSS"


@dataclasses.dataclass
class TapeEntry:
    label: str
    inputs: Tuple[torch.Tensor, ...]
    output: torch.Tensor
    replay: Optional[Callable[[Sequence[torch.Tensor]], torch.Tensor]] = None
    node: Optional[int] = None
    site: str = ""


class Tape:
    """Ordered record of one forward evaluation.

    Entries are appended as kernels execute, so every entry's inputs were
    produced by earlier entries (or are leaves). A tape belongs to a single
    evaluation and is not shared between threads.
    """
    def __init__(self):
        self.entries: List[TapeEntry] = []
        self.parameters: Dict[str, torch.Tensor] = {}

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[TapeEntry]:
        return iter(self.entries)

    def watch(self, named_parameters: Iterable[Tuple[str, torch.Tensor]],
              prefix: str = ""):
        for name, tensor in named_parameters:
            self.parameters[prefix + name] = tensor

    def record(self,
               label: str,
               inputs: Sequence[torch.Tensor],
               output: torch.Tensor,
               replay=None,
               node: Optional[int] = None,
               site: str = "") -> torch.Tensor:
        self.entries.append(
            TapeEntry(label, tuple(inputs), output, replay, node, site))
        return output

    def record_loss(self, loss: torch.Tensor) -> torch.Tensor:
        return self.record(LOSS_LABEL, (), loss)

    @property
    def loss(self) -> Optional[torch.Tensor]:
        if self.entries and self.entries[-1].label == LOSS_LABEL:
            return self.entries[-1].output
        return None

    def replay(self) -> bool:
        """Re-runs every replayable entry on its recorded inputs and checks
        the outputs are bit-identical to the recorded ones."""
        with torch.no_grad():
            for entry in self.entries:
                if entry.replay is None:
                    continue
                if not torch.equal(entry.replay(entry.inputs), entry.output):
                    logger.warning("replay of %s (node %s) diverged",
                                   entry.label, entry.node)
                    return False
        return True

    def outputs_by_node(self) -> Dict[int, torch.Tensor]:
        return {
            e.node: e.output
            for e in self.entries if e.node is not None
        }


class GradientSet(collections.abc.Mapping):
    """dLoss/dParam for every watched parameter the loss depends on."""
    def __init__(self, grads: Dict[str, torch.Tensor]):
        self._grads = dict(grads)

    def __getitem__(self, name: str) -> torch.Tensor:
        return self._grads[name]

    def __iter__(self):
        return iter(self._grads)

    def __len__(self):
        return len(self._grads)

    def global_norm(self) -> float:
        return math.sqrt(
            sum(float(torch.sum(g * g)) for g in self._grads.values()))

    def scaled(self, alpha: float) -> 'GradientSet':
        return GradientSet({k: g * alpha for k, g in self._grads.items()})

    def assign_to(self, parameters: Mapping[str, torch.Tensor]):
        """Writes gradients into ``.grad`` of the matching parameters."""
        for name, param in parameters.items():
            grad = self._grads.get(name)
            param.grad = None if grad is None else grad.detach().clone()


def backward(tape: Tape,
             loss_seed: Optional[torch.Tensor] = None,
             retain_graph: bool = False) -> GradientSet:
    loss = tape.loss
    if loss is None:
        raise ContractViolation("tape does not end in a loss entry")
    if loss.numel() != 1:
        raise ContractViolation(
            f"loss must be scalar, got shape {tuple(loss.shape)}")
    if loss_seed is None:
        loss_seed = torch.ones_like(loss)
    elif loss_seed.shape != loss.shape:
        raise ContractViolation(
            f"loss seed shape {tuple(loss_seed.shape)} differs from loss "
            f"shape {tuple(loss.shape)}")
    names = [n for n, p in tape.parameters.items() if p.requires_grad]
    if not names or not loss.requires_grad:
        return GradientSet({})
    grads = torch.autograd.grad(loss, [tape.parameters[n] for n in names],
                                grad_outputs=loss_seed.to(loss.dtype),
                                allow_unused=True,
                                retain_graph=retain_graph)
    result = {}
    for name, grad in zip(names, grads):
        if grad is None:
            continue
        if not bool(torch.isfinite(grad).all()):
            raise NumericOverflow("backward", detail=name)
        result[name] = grad
    return GradientSet(result)


@dataclasses.dataclass
class GradCheckReport:
    max_relative_error: float
    tolerance: float
    checked: int
    per_parameter: Dict[str, float]

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


def grad_check(graph: torch.nn.Module,
               inputs: torch.Tensor,
               epsilon: float = 1e-5,
               tolerance: float = 1e-4,
               samples: int = 200,
               seed: int = 0,
               floor: float = 1e-4) -> GradCheckReport:
    """Compares backward() with central finite differences.

    The scalar loss is sum(graph(inputs) * projection) for a fixed random
    projection.
    Relative error is |a - n| / max(|a|, |n|, floor).

    Args:
        graph: a CompiledGraph (any module taking ``(x, tape)``).
        inputs: block input.
        epsilon: finite difference step.
        tolerance: pass threshold on the max relative error.
        samples: coordinates checked, drawn uniformly over all parameters;
            every coordinate is checked when there are fewer.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    generator = torch.Generator().manual_seed(seed)
    params = dict(graph.named_parameters())

    tape = Tape()
    tape.watch(params.items())
    out = graph(inputs, tape)
    projection = torch.randn(out.shape, generator=generator, dtype=out.dtype)
    tape.record_loss(torch.sum(out * projection))
    grads = backward(tape)

    coordinates = [(name, i) for name, p in params.items()
                   for i in range(p.numel())]
    if len(coordinates) > samples:
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(coordinates), size=samples, replace=False)
        coordinates = [coordinates[i] for i in sorted(picked)]

    def loss_value() -> float:
        return float(torch.sum(graph(inputs) * projection))

    per_parameter: Dict[str, float] = {}
    worst = 0.0
    with torch.no_grad():
        for name, i in coordinates:
            flat = params[name].view(-1)
            original = float(flat[i])
            flat[i] = original + epsilon
            plus = loss_value()
            flat[i] = original - epsilon
            minus = loss_value()
            flat[i] = original
            numeric = (plus - minus) / (2.0 * epsilon)
            if not math.isfinite(numeric):
                raise NumericOverflow("grad_check", detail=name)
            analytic = float(grads[name].view(-1)[i]) if name in grads \
                else 0.0
            error = abs(analytic - numeric) / max(abs(analytic),
                                                  abs(numeric), floor)
            per_parameter[name] = max(per_parameter.get(name, 0.0), error)
            worst = max(worst, error)
    logger.info("grad check over %d coordinates: max relative error %.3e",
                len(coordinates), worst)
    return GradCheckReport(worst, tolerance, len(coordinates), per_parameter)
