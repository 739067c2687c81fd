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
"""Structural digests of compiled graphs.

A node digest covers its kind, opcode, width, resolved constant and the
digests of its inputs in argument order, so it names the computation rooted
at the node independently of where the node sits in the list. The graph
digest combines the output digest with the sorted multiset of node digests;
two graphs that differ only in node order hash equal, while one shared node
and two identical independent nodes do not.
"""

import hashlib
from typing import List, Sequence

from ..config import CompileConfig
from ..layers.modeling_block import CompiledGraph, Node, NodeKind
from ..program.dna import Dna
from .lowering import lower_to_nodes

__all__ = ['graph_digest', 'graph_hash', 'canonical_hash', 'HASH_SCALE_UNIT']

# scale unit used for hashing when the config leaves it open
HASH_SCALE_UNIT = 1

DIGEST_HEX = 16


def _node_digest(node: Node, inputs: Sequence[bytes]) -> bytes:
    h = hashlib.sha256()
    op = node.op.name if node.kind is NodeKind.PRIMITIVE else "-"
    h.update(f"{node.kind.name}|{op}|{node.width}|"
             f"{float(node.constant).hex()}|".encode("utf-8"))
    for digest in inputs:
        h.update(digest)
    return h.digest()


def graph_digest(nodes: Sequence[Node], output: int) -> str:
    digests: List[bytes] = []
    for node in nodes:
        digests.append(_node_digest(node, [digests[i] for i in node.inputs]))
    h = hashlib.sha256(digests[output])
    for digest in sorted(digests):
        h.update(digest)
    return h.hexdigest()[:DIGEST_HEX]


def graph_hash(graph: CompiledGraph) -> str:
    return graph_digest(graph.nodes, graph.output)


def canonical_hash(dna: Dna, config: CompileConfig) -> str:
    """64-bit hex digest of the dead-node-free graph of ``dna``.

    Raises:
        CompileError: when ``dna`` does not compile.
    """
    if config.scale_unit is None:
        config = config.with_scale_unit(HASH_SCALE_UNIT)
    nodes, output, _ = lower_to_nodes(dna, config)
    return graph_digest(nodes, output)
