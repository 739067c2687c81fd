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
from typing import Optional

from ..config import CompileConfig, StackConfig
from ..layers.modeling_block import CompiledGraph
from ..program.dna import Dna
from .lowering import lower_to_nodes
from .resize import resize_to_budget

__all__ = ['compile_program']

logger = logging.getLogger(__name__)


def compile_program(dna: Dna,
                    config: CompileConfig,
                    min_params: Optional[int] = None,
                    max_params: Optional[int] = None,
                    stack: Optional[StackConfig] = None,
                    seed: Optional[int] = None) -> CompiledGraph:
    """Compiles ``dna`` into an executable decoder block.

    Args:
        dna: the program.
        config: compile settings. When parameter bounds are given the scale
            unit is searched for and any unit in ``config`` is ignored.
        min_params, max_params: budget of the whole stack built on the block.
        stack: stack shape used to count the budget.
        seed: parameter initialization seed, ``config.seed`` by default.
    Returns:
        CompiledGraph with freshly initialized parameters.
    """
    if min_params is not None or max_params is not None:
        if min_params is None or max_params is None:
            raise ValueError("both min_params and max_params are needed")
        unit = resize_to_budget(dna, min_params, max_params, config, stack)
        config = config.with_scale_unit(unit)
    elif config.scale_unit is None:
        raise ValueError("compile needs a scale unit or parameter bounds")
    nodes, output, _ = lower_to_nodes(dna, config)
    graph = CompiledGraph(nodes, output, config, source=dna, seed=seed)
    logger.info("compiled %d nodes, %d parameters at scale unit %d",
                len(graph.nodes), graph.parameter_count(), config.scale_unit)
    return graph
