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
"""Direct evaluation of a Dna, subprogram by subprogram.

The walk follows the call structure of the program instead of the compiled
node list, taking each primitive's parameters from a compiled graph by
instruction site. Values are deferred until the output needs them, so dead
instructions (whose parameters the graph does not hold) are never run.
"""

from typing import Callable, List, Optional, Sequence

import torch

from ..errors import ShapeMismatch
from ..layers.modeling_block import CompiledGraph, Node, NodeKind, run_node
from ..program.dna import Dna
from .lowering import Backend, Lowering

__all__ = ['interpret']


class _Thunk:
    __slots__ = ("order", "inputs", "fn", "value")

    def __init__(self, order: int, inputs: Sequence['_Thunk'],
                 fn: Callable[[List[torch.Tensor]], torch.Tensor]):
        self.order = order
        self.inputs = tuple(inputs)
        self.fn = fn
        self.value: Optional[torch.Tensor] = None


class _DeferredBackend(Backend):
    def __init__(self, graph: CompiledGraph, x: torch.Tensor):
        self.graph = graph
        self.x = x
        self.thunks: List[_Thunk] = []

    def _defer(self, inputs, fn) -> _Thunk:
        thunk = _Thunk(len(self.thunks), inputs, fn)
        self.thunks.append(thunk)
        return thunk

    def _node(self, kind, width, op=None, constant=0.0, site=""):
        node = Node(-1, kind, (), width, op, constant, site)
        config = self.graph.config

        def fn(args):
            return run_node(node, args,
                            self.graph.site_parameters(site),
                            config.numeric_guards, config.causal_shift)

        return fn

    def input(self, width):
        return self._defer((), lambda args: self.x)

    def primitive(self, op, refs, width, constant, site):
        return self._defer(
            refs, self._node(NodeKind.PRIMITIVE, width, op, constant, site))

    def adapt(self, ref, width, site):
        return self._defer((ref, ), self._node(NodeKind.ADAPT, width))

    def concat(self, refs, width, site):
        return self._defer(refs, self._node(NodeKind.CONCAT, width))

    def band(self, ref, width, site):
        return self._defer((ref, ), self._node(NodeKind.BAND, width))

    def evaluate(self, output: _Thunk) -> torch.Tensor:
        needed = {output.order}
        stack = [output]
        while stack:
            for t in stack.pop().inputs:
                if t.order not in needed:
                    needed.add(t.order)
                    stack.append(t)
        for thunk in self.thunks:
            if thunk.order in needed:
                thunk.value = thunk.fn([t.value for t in thunk.inputs])
        return output.value


def interpret(dna: Dna, graph: CompiledGraph, x: torch.Tensor) -> torch.Tensor:
    """Runs ``dna`` on ``x`` with the parameters held by ``graph``.

    Args:
        dna: the program ``graph`` was compiled from.
        graph: supplies the config and parameters.
        x: [batch, seq_len, d_model].
    """
    if x.dim() != 3 or x.shape[-1] != graph.d_model:
        raise ShapeMismatch(f"expected [*, *, {graph.d_model}], got "
                            f"{tuple(x.shape)}")
    backend = _DeferredBackend(graph, x)
    out = Lowering(dna, graph.config, backend).run()
    return backend.evaluate(out.ref)
