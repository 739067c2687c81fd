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

import math
from typing import Callable

import torch

__all__ = ['lr_schedule', 'lr_factor', 'build_scheduler']


def lr_schedule(step: int, warmup: int, peak: float) -> float:
    """Linear warmup to ``peak``, then reciprocal square root decay.

    The two branches meet at ``step == warmup``.
    """
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if warmup < 1:
        raise ValueError(f"warmup must be >= 1, got {warmup}")
    return peak * min(step / warmup, math.sqrt(warmup / step))


def lr_factor(warmup: int) -> Callable[[int], float]:
    """Multiplier of the peak rate for LambdaLR, whose counter starts at 0
    for the first update."""
    def factor(epoch: int) -> float:
        return lr_schedule(epoch + 1, warmup, 1.0)

    return factor


def build_scheduler(optimizer: torch.optim.Optimizer,
                    warmup: int) -> torch.optim.lr_scheduler.LambdaLR:
    return torch.optim.lr_scheduler.LambdaLR(optimizer, lr_factor(warmup))
