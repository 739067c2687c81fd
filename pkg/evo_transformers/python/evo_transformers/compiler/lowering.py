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
"""Lowering of a Dna into a flat node list.

Calls are inlined recursively and each branch copy is lowered on its own, so
every copy owns its parameters. The walk is written against a small Backend
interface: GraphBuilder collects Nodes for compilation, the interpreter in
``interpreter.py`` evaluates tensors directly.

Causality. A value is *keyed* when its channel axis indexes key positions (the
output of TRANSPOSE_MAT_MUL and anything elementwise downstream of it). Such a
value may carry information from later positions in its upper triangle, so a
band mask is inserted before anything mixes its channels or reshapes them.
"""

import dataclasses
import logging
from collections import deque
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import CompileConfig
from ..errors import CompileError, InvalidDimension
from ..layers import kernels
from ..layers.modeling_block import Node, NodeKind
from ..layers.primitives import OpFamily, PrimitiveOp
from ..program.dna import IDENTITY, Call, Dna, Instruction
from .mismatch import Resolution, resolve_mismatch

__all__ = [
    'Value', 'Backend', 'GraphBuilder', 'Lowering', 'eliminate_dead_nodes',
    'lower_to_nodes', 'nodes_parameter_count', 'MAX_NODES'
]

logger = logging.getLogger(__name__)

MAX_NODES = 200000


@dataclasses.dataclass(frozen=True)
class Value:
    ref: Any
    width: int
    keyed: bool = False


class Backend:
    def input(self, width: int):
        raise NotImplementedError

    def primitive(self, op: PrimitiveOp, refs: Sequence[Any], width: int,
                  constant: float, site: str):
        raise NotImplementedError

    def adapt(self, ref, width: int, site: str):
        raise NotImplementedError

    def concat(self, refs: Sequence[Any], width: int, site: str):
        raise NotImplementedError

    def band(self, ref, width: int, site: str):
        raise NotImplementedError


class GraphBuilder(Backend):
    """Collects Nodes; refs are node indices."""
    def __init__(self):
        self.nodes: List[Node] = []

    def _add(self, kind: NodeKind, inputs, width: int, op=None,
             constant=0.0, site="") -> int:
        if len(self.nodes) >= MAX_NODES:
            raise CompileError(f"graph exceeds {MAX_NODES} nodes", site)
        node = Node(len(self.nodes), kind, tuple(inputs), width, op,
                    constant, site)
        self.nodes.append(node)
        return node.index

    def input(self, width):
        return self._add(NodeKind.INPUT, (), width, site="input")

    def primitive(self, op, refs, width, constant, site):
        return self._add(NodeKind.PRIMITIVE, refs, width, op, constant, site)

    def adapt(self, ref, width, site):
        return self._add(NodeKind.ADAPT, (ref, ), width, site=site)

    def concat(self, refs, width, site):
        return self._add(NodeKind.CONCAT, refs, width, site=site)

    def band(self, ref, width, site):
        return self._add(NodeKind.BAND, (ref, ), width, site=site)


class Lowering:
    def __init__(self, dna: Dna, config: CompileConfig, backend: Backend):
        if config.scale_unit is None or config.scale_unit < 1:
            raise InvalidDimension(
                f"scale unit must be a positive integer, got "
                f"{config.scale_unit}")
        self.dna = dna
        self.config = config
        self.backend = backend
        self.unit = config.scale_unit
        self.seq = config.seq_len
        self.d_model = config.d_model
        if self.d_model > config.width_cap:
            raise CompileError(
                f"d_model {self.d_model} exceeds the width cap "
                f"{config.width_cap}")
        # instruction site -> width of its (merged) result
        self.result_widths: Dict[str, int] = {}

    def run(self) -> Value:
        x = Value(self.backend.input(self.d_model), self.d_model)
        out = self._call(0, x, x, "")
        out = self._unkey(out, "output")
        if out.width != self.d_model:
            out = self._adapt(out, self.d_model, "output")
        return out

    def _checked(self, width: int, site: str) -> int:
        if width < 1:
            raise InvalidDimension(f"width {width}", site)
        if width > self.config.width_cap:
            raise CompileError(
                f"width {width} exceeds the cap {self.config.width_cap}",
                site)
        return width

    def _call(self, s: int, in0: Value, in1: Value, prefix: str) -> Value:
        states = [in0, in1]
        for k, instr in enumerate(self.dna.subprograms[s].instructions):
            site = f"{prefix}s{s}.{k + 2}"
            a, b = states[instr.input1], states[instr.input2]
            if instr.op is IDENTITY:
                result = a
            elif instr.branching == 1:
                result = self._instruction(s, k, instr, a, b, site, 0)
            else:
                copies = [
                    self._unkey(
                        self._instruction(s, k, instr, a, b, site, j),
                        f"{site}/b{j}:out")
                    for j in range(instr.branching)
                ]
                width = self._checked(sum(c.width for c in copies), site)
                result = Value(
                    self.backend.concat([c.ref for c in copies], width,
                                        f"{site}/merge"), width)
            self.result_widths[site] = result.width
            states.append(result)
        return states[-1]

    def _instruction(self, s: int, k: int, instr: Instruction, a: Value,
                     b: Value, site: str, copy: int) -> Value:
        if isinstance(instr.op, Call):
            return self._call(instr.op.subprogram, a, b, f"{site}/b{copy}/")
        return self._primitive(s, k, instr, a, b, f"{site}/b{copy}")

    def _unkey(self, v: Value, site: str) -> Value:
        if not v.keyed:
            return v
        logger.debug("%s: causal band before channel mixing", site)
        return Value(self.backend.band(v.ref, v.width, f"{site}:band"),
                     v.width)

    def _adapt(self, v: Value, width: int, site: str) -> Value:
        v = self._unkey(v, site)
        return Value(
            self.backend.adapt(v.ref, self._checked(width, site),
                               f"{site}:adapt"), width)

    def _match(self, a: Value, b: Value, key: Tuple[int, int, int],
               site: str, broadcast: bool) -> Tuple[Value, Value, int]:
        plan = resolve_mismatch(a.width, b.width, key, broadcast)
        if plan.resolution is Resolution.ADAPT_LHS:
            a = self._adapt(a, plan.width, f"{site}:lhs")
        elif plan.resolution is Resolution.ADAPT_RHS:
            b = self._adapt(b, plan.width, f"{site}:rhs")
        if plan.resolution in (Resolution.ADAPT_LHS, Resolution.ADAPT_RHS):
            logger.debug("%s: widths %d and %d resolved by %s %s", site,
                         plan.lhs_width, plan.rhs_width,
                         plan.resolution.name, plan.adapter)
        return a, b, plan.width

    def _primitive(self, s: int, k: int, instr: Instruction, a: Value,
                   b: Value, site: str) -> Value:
        op = instr.op
        family = op.family
        constant = self.dna.constants[instr.constant_idx] \
            if op.uses_constant else 0.0

        def emit(args: Sequence[Value], width: int, keyed: bool) -> Value:
            width = self._checked(width, site)
            ref = self.backend.primitive(op, [v.ref for v in args], width,
                                         constant, site)
            return Value(ref, width, keyed)

        if family in (OpFamily.UNARY, OpFamily.LEARNED,
                      OpFamily.CUMULATIVE):
            return emit([a], a.width, a.keyed)
        if family is OpFamily.MASK:
            return emit([a], a.width, False)
        if family is OpFamily.REDUCTION:
            return emit([self._unkey(a, site)], 1, False)
        if family is OpFamily.CONV:
            if op.depthwise:
                return emit([a], a.width, a.keyed)
            out_width = self.dna.dims[instr.dim_idx] * self.unit
            return emit([self._unkey(a, site)], out_width, False)
        key = (self.dna.metadata.lineage_seed, s, k)
        if op is PrimitiveOp.T_MAT_MUL:
            a = self._unkey(a, f"{site}:lhs")
            b = self._unkey(b, f"{site}:rhs")
            a, b, _ = self._match(a, b, key, site, broadcast=False)
            return emit([a, b], self.seq, True)
        if op is PrimitiveOp.MAT_MUL:
            # the attention side is always banded
            a = Value(self.backend.band(a.ref, a.width, f"{site}:band"),
                      a.width)
            if a.width != self.seq:
                raise CompileError(
                    f"MAT_MUL left operand width {a.width} differs from "
                    f"sequence length {self.seq}", site)
            return emit([a, b], b.width, b.keyed)
        a, b, width = self._match(a, b, key, site, broadcast=True)
        return emit([a, b], width, a.keyed or b.keyed)


def eliminate_dead_nodes(nodes: Sequence[Node],
                         output: int) -> Tuple[List[Node], int]:
    """Keeps the ancestors of ``output`` and renumbers them in order."""
    live = {output}
    queue = deque([output])
    while queue:
        for i in nodes[queue.popleft()].inputs:
            if i not in live:
                live.add(i)
                queue.append(i)
    kept = sorted(live)
    mapping = {old: new for new, old in enumerate(kept)}
    return [nodes[i].renumbered(mapping) for i in kept], mapping[output]


def lower_to_nodes(dna: Dna, config: CompileConfig
                   ) -> Tuple[List[Node], int, Lowering]:
    builder = GraphBuilder()
    lowering = Lowering(dna, config, builder)
    out = lowering.run()
    nodes, output = eliminate_dead_nodes(builder.nodes, out.ref)
    logger.debug("lowered %d nodes, %d live", len(builder.nodes), len(nodes))
    return nodes, output, lowering


def nodes_parameter_count(nodes: Sequence[Node]) -> int:
    total = 0
    for node in nodes:
        if node.kind is not NodeKind.PRIMITIVE:
            continue
        in_width = nodes[node.inputs[0]].width
        for shape in kernels.parameter_shapes(node.op, in_width,
                                              node.width).values():
            total += int(np.prod(shape))
    return total
