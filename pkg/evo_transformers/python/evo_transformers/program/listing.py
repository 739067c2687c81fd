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
"""Text formats of a Dna.

Canonical format (what `.dna` files hold)::

    # evo_transformers program
    constants: 0.0 0.125
    dims: 2 1 8 32 4 16
    metadata: lineage=- parent=- birth=- seed=0
    subprogram 0:
    (0)  INPUT
    (1)  INPUT
    (2)  CALL_5                 In0: 0    In1: 0    Dim: 0      C: 0  Branch: 1

Dim and C hold bank indices. The flattened format is the instruction list with
every call resolved; Dim holds absolute sizes and C constant values, and
branched instructions are wrapped in BRANCH_b_INPUT_1/2 ... BRANCH_MERGE.
"""

import dataclasses
import logging
import math
import re
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import BRANCHING_VALUES, DIMS_VOCABULARY, NUM_CONSTANTS, NUM_DIMS
from ..errors import ParseError
from ..layers.primitives import PrimitiveOp, listing_name, op_from_name
from .dna import IDENTITY, Call, Dna, DnaMetadata, Instruction, Opcode

__all__ = [
    'serialize_program', 'parse_program', 'parse_canonical',
    'parse_flattened', 'format_line', 'opcode_name', 'load_program',
    'save_program'
]

logger = logging.getLogger(__name__)

HEADER = "# evo_transformers program"

_LINE_RE = re.compile(r"^\((?P<index>\d+)\)\s+(?P<name>[A-Za-z0-9_]+)"
                      r"(?:\s+In0:\s*(?P<in0>-?\d+)\s+In1:\s*(?P<in1>-?\d+)"
                      r"\s+Dim:\s*(?P<dim>\S+)\s+C:\s*(?P<c>\S+)"
                      r"(?:\s+Branch:\s*(?P<branch>\S+))?)?\s*$")
_SECTION_RE = re.compile(r"^subprogram\s+(\d+)\s*:?\s*$")
_CALL_RE = re.compile(r"^CALL_(\d+)$")
_BRANCH_INPUT_RE = re.compile(r"^BRANCH_(\d+)_INPUT_([12])$")
_BRANCH_MERGE = "BRANCH_MERGE"
_TITLE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_\- ]*$")


def opcode_name(op: Opcode) -> str:
    if isinstance(op, Call):
        return f"CALL_{op.subprogram}"
    if op is IDENTITY:
        return "IDENTITY"
    return listing_name(op)


def format_line(index: int,
                name: str,
                in0: Optional[int] = None,
                in1: Optional[int] = None,
                dim: Optional[str] = None,
                constant: Optional[str] = None,
                branch: Optional[int] = None) -> str:
    head = f"{'(%d)' % index:<5}{name}"
    if in0 is None:
        return head
    text = (f"{'(%d)' % index:<5}{name:<23}In0: {in0:<5}In1: {in1:<5}"
            f"Dim: {dim:<7}C: {constant}")
    if branch is not None:
        text += f"  Branch: {branch}"
    return text


def _format_optional(value: Optional[int]) -> str:
    return "-" if value is None else str(value)


def serialize_program(dna: Dna) -> str:
    md = dna.metadata
    lines = [
        HEADER,
        "constants: " + " ".join(repr(c) for c in dna.constants),
        "dims: " + " ".join(str(d) for d in dna.dims),
        f"metadata: lineage={_format_optional(md.lineage_id)} "
        f"parent={_format_optional(md.parent_id)} "
        f"birth={_format_optional(md.birth_step)} seed={md.lineage_seed}",
    ]
    for s, sub in enumerate(dna.subprograms):
        lines.append(f"subprogram {s}:")
        lines.append(format_line(0, "INPUT"))
        lines.append(format_line(1, "INPUT"))
        for k, instr in enumerate(sub.instructions):
            lines.append(
                format_line(k + 2, opcode_name(instr.op), instr.input1,
                            instr.input2, str(instr.dim_idx),
                            str(instr.constant_idx), instr.branching))
    return "\n".join(lines) + "\n"


def _parse_opcode(name: str, line: int, allow_call: bool = True) -> Opcode:
    match = _CALL_RE.match(name)
    if match is not None:
        if not allow_call:
            raise ParseError(f"call {name} inside a flattened listing", line)
        return Call(int(match.group(1)))
    if name.upper() == "IDENTITY":
        return IDENTITY
    op = op_from_name(name)
    if op is None:
        raise ParseError(f"unknown opcode {name!r}", line)
    return op


def _parse_int(text: str, what: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not an integer", line)


def _parse_float(text: str, what: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line)


def _parse_metadata(text: str, line: int) -> DnaMetadata:
    fields = {}
    for item in text.split():
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"metadata item {item!r} lacks '='", line)
        fields[key] = None if value == "-" else _parse_int(value, key, line)
    unknown = set(fields) - {"lineage", "parent", "birth", "seed"}
    if unknown:
        raise ParseError(f"unknown metadata keys {sorted(unknown)}", line)
    return DnaMetadata(lineage_id=fields.get("lineage"),
                       parent_id=fields.get("parent"),
                       birth_step=fields.get("birth"),
                       lineage_seed=fields.get("seed") or 0)


def _numbered_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield number, stripped


def parse_canonical(text: str) -> Dna:
    constants: Optional[List[float]] = None
    dims: Optional[List[int]] = None
    metadata = DnaMetadata()
    subprograms: List[List[Instruction]] = []
    section_line = 0

    def close_section():
        if subprograms and not subprograms[-1]:
            raise ParseError(
                f"subprogram {len(subprograms) - 1} has an empty body",
                section_line)

    for number, line in _numbered_lines(text):
        key, _, rest = line.partition(":")
        if key == "constants":
            constants = [
                _parse_float(v, "constant", number) for v in rest.split()
            ]
            if len(constants) > NUM_CONSTANTS:
                raise ParseError(
                    f"bank overflow: {len(constants)} constants declared, "
                    f"at most {NUM_CONSTANTS}", number)
            continue
        if key == "dims":
            dims = [_parse_int(v, "dim", number) for v in rest.split()]
            if len(dims) > NUM_DIMS:
                raise ParseError(
                    f"bank overflow: {len(dims)} dims declared, "
                    f"at most {NUM_DIMS}", number)
            for d in dims:
                if d not in DIMS_VOCABULARY:
                    raise ParseError(f"relative dim {d} outside vocabulary",
                                     number)
            continue
        if key == "metadata":
            metadata = _parse_metadata(rest, number)
            continue
        section = _SECTION_RE.match(line)
        if section is not None:
            close_section()
            if int(section.group(1)) != len(subprograms):
                raise ParseError(
                    f"expected subprogram {len(subprograms)}, "
                    f"got {section.group(1)}", number)
            subprograms.append([])
            section_line = number
            continue
        match = _LINE_RE.match(line)
        if match is None:
            raise ParseError(f"unrecognized line {line!r}", number)
        if not subprograms:
            raise ParseError("instruction before any subprogram header",
                             number)
        body = subprograms[-1]
        index = int(match.group("index"))
        if match.group("in0") is None:
            if match.group("name") != "INPUT" or index > 1 or body:
                raise ParseError(f"malformed line {line!r}", number)
            continue
        if index != len(body) + 2:
            raise ParseError(
                f"instruction numbered {index}, expected {len(body) + 2}",
                number)
        op = _parse_opcode(match.group("name"), number)
        branch = match.group("branch")
        instr = Instruction(
            op=op,
            input1=int(match.group("in0")),
            input2=int(match.group("in1")),
            dim_idx=_parse_int(match.group("dim"), "dim index", number),
            constant_idx=_parse_int(match.group("c"), "constant index",
                                    number),
            branching=1 if branch is None else _parse_int(
                branch, "branching", number))
        if not (0 <= instr.input1 < index and 0 <= instr.input2 < index):
            raise ParseError(f"instruction {index} reads a later state",
                             number)
        if not 0 <= instr.dim_idx < NUM_DIMS:
            raise ParseError(f"dim index {instr.dim_idx} outside the bank",
                             number)
        if not 0 <= instr.constant_idx < NUM_CONSTANTS:
            raise ParseError(
                f"constant index {instr.constant_idx} outside the bank",
                number)
        body.append(instr)
    close_section()
    if not subprograms:
        raise ParseError("program declares no subprogram")
    if constants is None or len(constants) != NUM_CONSTANTS:
        raise ParseError(f"constants bank must hold {NUM_CONSTANTS} values")
    if dims is None or len(dims) != NUM_DIMS:
        raise ParseError(f"dims bank must hold {NUM_DIMS} values")
    try:
        return Dna.from_lists(subprograms, constants, dims, metadata)
    except ValueError as e:
        raise ParseError(str(e))


@dataclasses.dataclass(frozen=True)
class _FlatLine:
    number: int
    index: int
    name: str
    in0: int
    in1: int
    dim: int
    constant: float


class _FlattenedParser:
    def __init__(self, lines: Sequence[_FlatLine]):
        self.lines = lines
        body_dims = [l.dim for l in lines if l.name != _BRANCH_MERGE]
        if not body_dims:
            raise ParseError("flattened listing holds no instruction")
        if min(body_dims) <= 0:
            raise ParseError("Dim values must be positive")
        self.scale_unit = reduce(math.gcd, body_dims)
        self.constants = self._bank([l.constant for l in lines],
                                    NUM_CONSTANTS, "constants",
                                    (0.0, 1.0, -1.0))
        relative = []
        for l in lines:
            if l.name == _BRANCH_MERGE:
                continue
            value = l.dim // self.scale_unit
            if value not in DIMS_VOCABULARY:
                raise ParseError(
                    f"Dim {l.dim} is {value} x {self.scale_unit}, outside the "
                    f"relative dims vocabulary", l.number)
            relative.append(value)
        self.dims = self._bank(relative, NUM_DIMS, "dims", DIMS_VOCABULARY)
        self.subprograms: List[Optional[List[Instruction]]] = []

    @staticmethod
    def _bank(values, size, what, padding):
        bank = []
        for v in values:
            if v not in bank:
                bank.append(v)
        if len(bank) > size:
            raise ParseError(f"bank overflow: {len(bank)} distinct {what}, "
                             f"at most {size}")
        for v in padding:
            if len(bank) == size:
                break
            if v not in bank:
                bank.append(v)
        return bank

    def _dim_idx(self, line: _FlatLine) -> int:
        return self.dims.index(line.dim // self.scale_unit)

    def _constant_idx(self, line: _FlatLine) -> int:
        return self.constants.index(line.constant)

    def _find_merge(self, start: int, end: int) -> int:
        depth = 0
        for j in range(start, end):
            name = self.lines[j].name
            branch = _BRANCH_INPUT_RE.match(name)
            if branch is not None and branch.group(2) == "1":
                depth += 1
            elif name == _BRANCH_MERGE:
                if depth == 0:
                    return j
                depth -= 1
        raise ParseError("branch without BRANCH_MERGE",
                         self.lines[start - 1].number)

    @staticmethod
    def _resolve(scope: Dict[int, int], index: int, line: _FlatLine) -> int:
        if index not in scope:
            raise ParseError(f"state {index} is not visible here", line.number)
        return scope[index]

    def build(self, start: int, end: int, scope: Dict[int, int],
              target: int):
        body: List[Instruction] = []
        i = start
        while i < end:
            line = self.lines[i]
            branch = _BRANCH_INPUT_RE.match(line.name)
            if line.name == _BRANCH_MERGE or (branch is not None
                                              and branch.group(2) == "2"):
                raise ParseError(f"unexpected {line.name}", line.number)
            if branch is None:
                op = _parse_opcode(line.name, line.number, allow_call=False)
                body.append(
                    Instruction(op, self._resolve(scope, line.in0, line),
                                self._resolve(scope, line.in1, line),
                                self._constant_idx(line),
                                self._dim_idx(line)))
                scope[line.index] = len(body) + 1
                i += 1
                continue

            factor = int(branch.group(1))
            if factor not in BRANCHING_VALUES:
                raise ParseError(f"branching {factor} not allowed",
                                 line.number)
            if i + 1 >= end or self.lines[i + 1].name != \
                    f"BRANCH_{factor}_INPUT_2":
                raise ParseError("BRANCH_INPUT_1 without its INPUT_2",
                                 line.number)
            second = self.lines[i + 1]
            merge = self._find_merge(i + 2, end)
            in1 = self._resolve(scope, line.in0, line)
            in2 = self._resolve(scope, second.in0, second)
            region = self.lines[i + 2:merge]
            if not region:
                raise ParseError("empty branch body", line.number)
            single = region[0]
            if len(region) == 1 and single.in0 == line.index and \
                    single.in1 == second.index and \
                    isinstance(_parse_opcode(single.name, single.number,
                                             False), PrimitiveOp):
                instr = Instruction(
                    _parse_opcode(single.name, single.number, False), in1,
                    in2, self._constant_idx(single), self._dim_idx(single),
                    factor)
            else:
                callee = len(self.subprograms)
                self.subprograms.append(None)
                self.build(i + 2, merge, {
                    line.index: 0,
                    second.index: 1
                }, callee)
                instr = Instruction(Call(callee), in1, in2,
                                    self._constant_idx(line),
                                    self._dim_idx(line), factor)
            body.append(instr)
            scope[self.lines[merge].index] = len(body) + 1
            i = merge + 1
        if not body:
            raise ParseError("empty subprogram body")
        self.subprograms[target] = body


def parse_flattened(text: str) -> Tuple[Dna, int]:
    """Rebuilds a Dna and its scale unit from a flattened listing.

    Branch regions become subprograms numbered in order of appearance. Banks
    are filled by first appearance, so the original bank indices (and any
    bank slot no instruction shows) are not recovered.
    """
    lines: List[_FlatLine] = []
    inputs = 0
    for number, line in _numbered_lines(text):
        match = _LINE_RE.match(line)
        if match is None:
            if not lines and inputs == 0 and _TITLE_RE.match(line):
                continue
            raise ParseError(f"unrecognized line {line!r}", number)
        index = int(match.group("index"))
        if match.group("in0") is None:
            if match.group("name") != "INPUT" or index != inputs:
                raise ParseError(f"malformed line {line!r}", number)
            inputs += 1
            continue
        expected = inputs + len(lines)
        if inputs != 2 or index != expected:
            raise ParseError(f"line numbered {index}, expected {expected}",
                             number)
        lines.append(
            _FlatLine(number, index, match.group("name").upper(),
                      int(match.group("in0")), int(match.group("in1")),
                      _parse_int(match.group("dim"), "Dim", number),
                      _parse_float(match.group("c"), "C", number)))
    parser = _FlattenedParser(lines)
    parser.subprograms.append(None)
    parser.build(0, len(lines), {0: 0, 1: 1}, 0)
    try:
        dna = Dna.from_lists(parser.subprograms, parser.constants,
                             parser.dims)
    except ValueError as e:
        raise ParseError(str(e))
    return dna, parser.scale_unit


def parse_program(text: str) -> Dna:
    """Reads either format; the flattened scale unit is dropped."""
    for _, line in _numbered_lines(text):
        if _SECTION_RE.match(line):
            return parse_canonical(text)
    logger.debug("no subprogram header, reading a flattened listing")
    return parse_flattened(text)[0]


def load_program(path: str) -> Dna:
    with open(path, "r", encoding="utf-8") as f:
        return parse_program(f.read())


def save_program(dna: Dna, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_program(dna))
