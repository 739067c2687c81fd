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


from .mismatch import Resolution, MismatchPlan, resolve_mismatch
from .lowering import Value, Backend, GraphBuilder, Lowering, eliminate_dead_nodes, lower_to_nodes, \
    nodes_parameter_count, MAX_NODES
from .resize import block_parameter_count, stack_parameter_count, resize_to_budget
from .graph import compile_program
from .hashing import graph_digest, graph_hash, canonical_hash
from .causality import CausalityViolation, CausalityReport, verify_causality
from .interpreter import interpret
from .dump import dump_text, dump_dot
from .flatten import emit_flattened

__all__ = [
    'Resolution', 'MismatchPlan', 'resolve_mismatch', 'Value', 'Backend',
    'GraphBuilder', 'Lowering', 'eliminate_dead_nodes', 'lower_to_nodes',
    'nodes_parameter_count', 'MAX_NODES', 'block_parameter_count',
    'stack_parameter_count', 'resize_to_budget', 'compile_program',
    'graph_digest', 'graph_hash', 'canonical_hash', 'CausalityViolation',
    'CausalityReport', 'verify_causality', 'interpret', 'dump_text',
    'dump_dot', 'emit_flattened'
]
