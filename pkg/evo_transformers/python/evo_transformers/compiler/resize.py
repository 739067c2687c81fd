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

import logging
import math
from typing import Dict, Optional

from ..config import MAX_SCALE_UNIT, CompileConfig, StackConfig
from ..errors import CompileError, ResizeFailure
from ..program.dna import Dna
from .lowering import lower_to_nodes, nodes_parameter_count

__all__ = [
    'block_parameter_count', 'stack_parameter_count', 'resize_to_budget'
]

logger = logging.getLogger(__name__)


def block_parameter_count(dna: Dna, config: CompileConfig) -> int:
    nodes, _, _ = lower_to_nodes(dna, config)
    return nodes_parameter_count(nodes)


def stack_parameter_count(dna: Dna,
                          config: CompileConfig,
                          stack: Optional[StackConfig] = None) -> int:
    """Parameters of the decoder stack built on ``dna`` at ``config``.

    L blocks, token and positional embeddings, and the output projection:
    a vocab bias when tied to the embedding, a full matrix plus bias
    otherwise.
    """
    stack = stack or StackConfig()
    d = config.d_model
    total = stack.n_layers * block_parameter_count(dna, config)
    total += stack.vocab * d + config.seq_len * d
    if stack.tie_embeddings:
        total += stack.vocab
    else:
        total += d * stack.vocab + stack.vocab
    return total


def resize_to_budget(dna: Dna,
                     min_params: int,
                     max_params: int,
                     config: CompileConfig,
                     stack: Optional[StackConfig] = None) -> int:
    """Smallest scale unit whose stack lands in [min_params, max_params].

    The count grows with the unit, so the search doubles the unit until the
    count reaches min_params and then bisects. A unit that fails to compile
    (a width over the cap) counts as infinitely large.

    Returns:
        the chosen scale unit.
    Raises:
        ResizeFailure: carrying the counts at the two units that bracket
            the interval.
    """
    if min_params >= max_params:
        raise ValueError(
            f"min_params {min_params} must be below max_params {max_params}")
    cache: Dict[int, float] = {}

    def count(unit: int) -> float:
        if unit not in cache:
            try:
                cache[unit] = stack_parameter_count(
                    dna, config.with_scale_unit(unit), stack)
            except CompileError:
                cache[unit] = math.inf
        return cache[unit]

    def fail(lower: int, upper: int):
        low = count(lower) if lower >= 1 else 0
        raise ResizeFailure(low, count(upper), min_params, max_params)

    upper = 1
    while count(upper) < min_params:
        if upper >= MAX_SCALE_UNIT:
            fail(upper, upper)
        upper = min(upper * 2, MAX_SCALE_UNIT)
    lower = upper // 2
    # invariant: count(lower) < min_params <= count(upper), lower may be 0
    while upper - lower > 1:
        middle = (lower + upper) // 2
        if count(middle) < min_params:
            lower = middle
        else:
            upper = middle
    if count(upper) > max_params:
        fail(lower, upper)
    logger.info("scale unit %d gives %d parameters (budget [%d, %d])", upper,
                count(upper), min_params, max_params)
    return upper
