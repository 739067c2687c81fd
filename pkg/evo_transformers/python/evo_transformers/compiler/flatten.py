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

from typing import Dict, List, Optional

from ..config import CompileConfig
from ..program.dna import IDENTITY, Call, Dna
from ..program.listing import format_line, opcode_name
from .lowering import GraphBuilder, Lowering

__all__ = ['emit_flattened']


class _Emitter:
    def __init__(self, dna: Dna, scale_unit: int, widths: Dict[str, int]):
        self.dna = dna
        self.unit = scale_unit
        self.widths = widths
        self.lines: List[str] = [
            format_line(0, "INPUT"),
            format_line(1, "INPUT")
        ]

    def _emit(self, name: str, in0: int, in1: int, dim: int,
              constant: float) -> int:
        index = len(self.lines)
        self.lines.append(
            format_line(index, name, in0, in1, str(dim), "%.2f" % constant))
        return index

    def walk(self, s: int, in0: int, in1: int, prefix: str) -> int:
        states = [in0, in1]
        for k, instr in enumerate(self.dna.subprograms[s].instructions):
            site = f"{prefix}s{s}.{k + 2}"
            a, b = states[instr.input1], states[instr.input2]
            dim = self.dna.dims[instr.dim_idx] * self.unit
            constant = self.dna.constants[instr.constant_idx]
            op = instr.op
            if op is IDENTITY or (instr.branching == 1
                                  and not isinstance(op, Call)):
                out = self._emit(opcode_name(op), a, b, dim, constant)
            elif instr.branching == 1:
                out = self.walk(op.subprogram, a, b, f"{site}/b0/")
            else:
                factor = instr.branching
                first = self._emit(f"BRANCH_{factor}_INPUT_1", a, a, dim,
                                   constant)
                second = self._emit(f"BRANCH_{factor}_INPUT_2", b, b, dim,
                                    constant)
                if isinstance(op, Call):
                    body = self.walk(op.subprogram, first, second,
                                     f"{site}/b0/")
                else:
                    body = self._emit(opcode_name(op), first, second, dim,
                                      constant)
                out = self._emit("BRANCH_MERGE", body, body,
                                 self.widths[site], constant)
            states.append(out)
        return states[-1]


def emit_flattened(dna: Dna,
                   scale_unit: int,
                   config: Optional[CompileConfig] = None,
                   title: Optional[str] = None) -> str:
    """Renders ``dna`` with every call resolved.

    Dims are absolute (relative value times ``scale_unit``), constants are
    printed with two decimals, and unbranched calls disappear into the
    caller. A branched instruction shows its two inputs, one copy of its
    body and a BRANCH_MERGE whose Dim is the merged width.

    Raises:
        CompileError: widths come from a lowering of the program.
    """
    config = (config or CompileConfig()).with_scale_unit(scale_unit)
    lowering = Lowering(dna, config, GraphBuilder())
    lowering.run()
    emitter = _Emitter(dna, scale_unit, lowering.result_widths)
    emitter.walk(0, 0, 1, "")
    lines = ([title] if title else []) + emitter.lines
    return "\n".join(lines) + "\n"
