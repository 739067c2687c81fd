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

from typing import List

import numpy as np

from ..layers.modeling_block import CompiledGraph, NodeKind
from ..layers.primitives import listing_name

__all__ = ['dump_text', 'dump_dot']


def _name(node) -> str:
    if node.kind is NodeKind.PRIMITIVE:
        return listing_name(node.op)
    return node.kind.name


def _params(graph: CompiledGraph, node) -> int:
    return sum(
        int(np.prod(shape))
        for shape in graph.parameter_shapes(node).values())


def dump_text(graph: CompiledGraph) -> str:
    """One line per node: index, name, inputs, resolved width, parameter
    count and instruction site."""
    lines: List[str] = [
        f"# nodes={len(graph.nodes)} output={graph.output} "
        f"d_model={graph.d_model} scale_unit={graph.scale_unit} "
        f"parameters={graph.parameter_count()}"
    ]
    for node in graph.nodes:
        inputs = ",".join(str(i) for i in node.inputs) or "-"
        text = (f"{node.index:>5} {_name(node):<22} in=({inputs}) "
                f"width={node.width}")
        if node.op is not None and node.op.uses_constant:
            text += f" c={node.constant:.6g}"
        count = _params(graph, node)
        if count:
            text += f" params={count}"
        if node.site:
            text += f" @{node.site}"
        lines.append(text)
    return "\n".join(lines) + "\n"


def dump_dot(graph: CompiledGraph, name: str = "block") -> str:
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for node in graph.nodes:
        shape = "box" if node.kind is NodeKind.PRIMITIVE else "ellipse"
        peripheries = 2 if node.index == graph.output else 1
        lines.append(f'  n{node.index} [label="{_name(node)}\\n{node.width}"'
                     f', shape={shape}, peripheries={peripheries}];')
    for node in graph.nodes:
        for slot, i in enumerate(node.inputs):
            lines.append(f'  n{i} -> n{node.index} [label="{slot}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
