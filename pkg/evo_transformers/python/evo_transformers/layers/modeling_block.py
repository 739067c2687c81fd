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
import functools
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch
from torch import nn

from ..config import CompileConfig
from ..errors import NumericOverflow, ShapeMismatch
from . import kernels
from .primitives import OpFamily, PrimitiveOp

__all__ = ['NodeKind', 'Node', 'run_node', 'CompiledGraph']


class NodeKind(enum.Enum):
    INPUT = 0
    PRIMITIVE = 1
    # parameter-free channel truncation or cyclic tiling
    ADAPT = 2
    CONCAT = 3
    # implicit causal band in front of a channel-mixing consumer
    BAND = 4


@dataclasses.dataclass(frozen=True)
class Node:
    index: int
    kind: NodeKind
    inputs: Tuple[int, ...]
    width: int
    op: Optional[PrimitiveOp] = None
    constant: float = 0.0
    site: str = ""

    @property
    def label(self) -> str:
        if self.kind is NodeKind.PRIMITIVE:
            return self.op.name
        return self.kind.name

    def renumbered(self, mapping: Dict[int, int]) -> 'Node':
        return dataclasses.replace(self,
                                   index=mapping[self.index],
                                   inputs=tuple(mapping[i]
                                                for i in self.inputs))


def run_node(node: Node,
             args: Sequence[torch.Tensor],
             params: Dict[str, torch.Tensor],
             guard: bool = True,
             causal: bool = True) -> torch.Tensor:
    """Evaluates one node on already computed inputs."""
    kind = node.kind
    if kind is NodeKind.ADAPT:
        return kernels.adapt_channels(args[0], node.width)
    if kind is NodeKind.CONCAT:
        return torch.cat(list(args), dim=-1)
    if kind is NodeKind.BAND:
        return kernels.band_lower(args[0])
    if kind is not NodeKind.PRIMITIVE:
        raise ShapeMismatch(f"node {node.index} of kind {kind.name} has no "
                            f"kernel")

    op = node.op
    family = op.family
    if family is OpFamily.UNARY:
        return kernels.apply_unary(op, args[0], node.constant, guard)
    if family is OpFamily.BINARY:
        return kernels.apply_binary(op, args[0], args[1], guard)
    if family is OpFamily.REDUCTION:
        return kernels.apply_reduction(op, args[0])
    if family is OpFamily.CUMULATIVE:
        return kernels.apply_cumulative(op, args[0])
    if family is OpFamily.MATMUL:
        return kernels.matmul_pair(op, args[0], args[1])
    if family is OpFamily.CONV:
        return kernels.conv_spatial(op, args[0], node.width, params, causal)
    if family is OpFamily.MASK:
        x = args[0]
        if x.shape[-1] == x.shape[-2]:
            return kernels.apply_mask(x)
        return kernels.band_lower(x)
    if family is OpFamily.LEARNED:
        return kernels.apply_learned(op, args[0], params)
    raise ShapeMismatch(f"no kernel for {op.name}")


def _param_key(index: int, name: str) -> str:
    return f"n{index}_{name}"


class CompiledGraph(nn.Module):
    """A decoder block compiled from a Dna.

    Nodes are topologically ordered and every node lies in the cone of the
    output node. Parameters live in a ParameterDict keyed ``n<node>_<name>``.
    """
    def __init__(self,
                 nodes: Sequence[Node],
                 output: int,
                 config: CompileConfig,
                 source=None,
                 seed: Optional[int] = None):
        super(CompiledGraph, self).__init__()
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        self.output = output
        self.config = config
        self.source = source
        self.scale_unit = config.scale_unit
        self.d_model = config.d_model
        self.seq_len = config.seq_len
        self.site_index = {
            node.site: node.index
            for node in self.nodes if node.kind is NodeKind.PRIMITIVE
        }
        self.params = nn.ParameterDict()
        self.reset_parameters(config.seed if seed is None else seed)

    def in_width(self, node: Node) -> int:
        return self.nodes[node.inputs[0]].width if node.inputs else 0

    def parameter_shapes(self, node: Node) -> Dict[str, Tuple[int, ...]]:
        if node.kind is not NodeKind.PRIMITIVE:
            return {}
        return kernels.parameter_shapes(node.op, self.in_width(node),
                                        node.width)

    def reset_parameters(self, seed: int):
        generator = torch.Generator().manual_seed(seed)
        params = {}
        for node in self.nodes:
            if not self.parameter_shapes(node):
                continue
            values = kernels.init_parameters(node.op, self.in_width(node),
                                             node.width, generator)
            for name, value in values.items():
                params[_param_key(node.index, name)] = nn.Parameter(value)
        self.params = nn.ParameterDict(params)

    def node_parameters(self, node: Node) -> Dict[str, torch.Tensor]:
        return {
            name: self.params[_param_key(node.index, name)]
            for name in self.parameter_shapes(node)
        }

    def site_parameters(self, site: str) -> Dict[str, torch.Tensor]:
        index = self.site_index.get(site)
        if index is None:
            return {}
        return self.node_parameters(self.nodes[index])

    def parameter_count(self) -> int:
        return sum(
            int(np.prod(shape)) for node in self.nodes
            for shape in self.parameter_shapes(node).values())

    def replicate(self, seed: int) -> 'CompiledGraph':
        """Same nodes, freshly initialized parameters."""
        return CompiledGraph(self.nodes, self.output, self.config,
                             self.source, seed)

    def _run(self, node: Node, args: Sequence[torch.Tensor]) -> torch.Tensor:
        try:
            return run_node(node, args, self.node_parameters(node),
                            self.config.numeric_guards,
                            self.config.causal_shift)
        except NumericOverflow as e:
            raise NumericOverflow(e.op, node.index, node.site) from e

    def forward(self, x: torch.Tensor, tape=None) -> torch.Tensor:
        """
        Args:
            x: [batch, seq_len, d_model] float64.
            tape: optional autograd Tape recording every node application.
        Returns:
            [batch, seq_len, d_model].
        """
        if x.dim() != 3 or x.shape[-1] != self.d_model or \
                x.shape[1] != self.seq_len:
            raise ShapeMismatch(
                f"block compiled for [*, {self.seq_len}, {self.d_model}], "
                f"got {tuple(x.shape)}")
        values: List[Optional[torch.Tensor]] = [None] * len(self.nodes)
        for node in self.nodes:
            if node.kind is NodeKind.INPUT:
                out = x
                args = ()
            else:
                args = tuple(values[i] for i in node.inputs)
                out = self._run(node, args)
            if tape is not None:
                replay = None if node.kind is NodeKind.INPUT else \
                    functools.partial(self._run, node)
                tape.record(node.label, args, out, replay, node.index,
                            node.site)
            values[node.index] = out
        return values[self.output]

    def extra_repr(self) -> str:
        return (f"nodes={len(self.nodes)}, d_model={self.d_model}, "
                f"scale_unit={self.scale_unit}, "
                f"parameters={self.parameter_count()}")
