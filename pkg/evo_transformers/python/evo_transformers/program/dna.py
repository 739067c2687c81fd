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
from typing import Iterable, Optional, Sequence, Tuple, Union

from ..config import BRANCHING_VALUES, DIMS_VOCABULARY, NUM_CONSTANTS, NUM_DIMS
from ..layers.primitives import PrimitiveOp

__all__ = [
    'Call', 'PassThrough', 'IDENTITY', 'Opcode', 'Instruction', 'Subprogram',
    'DnaMetadata', 'Dna', 'op_label'
]


@dataclasses.dataclass(frozen=True)
class Call:
    subprogram: int


class PassThrough(enum.Enum):
    # output is hidden state input1; only used so a delete never empties a body
    IDENTITY = 0


IDENTITY = PassThrough.IDENTITY

Opcode = Union[PrimitiveOp, Call, PassThrough]


def op_label(op: Opcode) -> str:
    if isinstance(op, Call):
        return f"CALL_{op.subprogram}"
    return op.name


@dataclasses.dataclass(frozen=True)
class Instruction:
    op: Opcode
    input1: int = 0
    input2: int = 0
    constant_idx: int = 0
    dim_idx: int = 0
    branching: int = 1

    @staticmethod
    def make(op,
             input1: int,
             input2: int,
             constant_idx: int = 0,
             dim_idx: int = 0,
             branching: int = 1) -> 'Instruction':
        """Like the constructor; an int ``op`` is read as a call."""
        if isinstance(op, int) and not isinstance(op, enum.Enum):
            op = Call(op)
        return Instruction(op, input1, input2, constant_idx, dim_idx,
                           branching)

    def replace(self, **changes) -> 'Instruction':
        return dataclasses.replace(self, **changes)

    @property
    def is_call(self) -> bool:
        return isinstance(self.op, Call)


@dataclasses.dataclass(frozen=True)
class Subprogram:
    instructions: Tuple[Instruction, ...]

    def __len__(self):
        return len(self.instructions)

    def __getitem__(self, k: int) -> Instruction:
        return self.instructions[k]

    @property
    def output_index(self) -> int:
        """Hidden state of the final instruction (inputs occupy 0 and 1)."""
        return len(self.instructions) + 1

    def replace_instruction(self, k: int, instr: Instruction) -> 'Subprogram':
        body = list(self.instructions)
        body[k] = instr
        return Subprogram(tuple(body))


@dataclasses.dataclass(frozen=True)
class DnaMetadata:
    lineage_id: Optional[int] = None
    parent_id: Optional[int] = None
    birth_step: Optional[int] = None
    # inherited by every descendant; keys mismatch resolution
    lineage_seed: int = 0


@dataclasses.dataclass(frozen=True)
class Dna:
    subprograms: Tuple[Subprogram, ...]
    constants: Tuple[float, ...]
    dims: Tuple[int, ...]
    metadata: DnaMetadata = DnaMetadata()

    def __post_init__(self):
        object.__setattr__(self, "constants",
                           tuple(float(c) for c in self.constants))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        self.validate()

    @staticmethod
    def from_lists(subprograms: Iterable[Sequence[Instruction]],
                   constants: Sequence[float],
                   dims: Sequence[int],
                   metadata: Optional[DnaMetadata] = None) -> 'Dna':
        return Dna(tuple(Subprogram(tuple(body)) for body in subprograms),
                   tuple(constants), tuple(dims), metadata or DnaMetadata())

    def validate(self):
        if len(self.constants) != NUM_CONSTANTS:
            raise ValueError(
                f"constants bank holds {len(self.constants)} values, "
                f"expected {NUM_CONSTANTS}")
        if len(self.dims) != NUM_DIMS:
            raise ValueError(f"dims bank holds {len(self.dims)} values, "
                             f"expected {NUM_DIMS}")
        for d in self.dims:
            if d not in DIMS_VOCABULARY:
                raise ValueError(f"relative dim {d} outside vocabulary")
        if not self.subprograms:
            raise ValueError("a program needs an entry subprogram")
        for s, sub in enumerate(self.subprograms):
            if len(sub) == 0:
                raise ValueError(f"subprogram {s} is empty")
            for k, instr in enumerate(sub.instructions):
                self._validate_instruction(s, k, instr)

    def _validate_instruction(self, s: int, k: int, instr: Instruction):
        where = f"subprogram {s} instruction {k + 2}"
        limit = k + 2
        if not 0 <= instr.input1 < limit or not 0 <= instr.input2 < limit:
            raise ValueError(f"{where} reads a state at or after itself")
        if not 0 <= instr.constant_idx < NUM_CONSTANTS:
            raise ValueError(f"{where} constant index {instr.constant_idx}")
        if not 0 <= instr.dim_idx < NUM_DIMS:
            raise ValueError(f"{where} dim index {instr.dim_idx}")
        if instr.branching not in BRANCHING_VALUES:
            raise ValueError(f"{where} branching {instr.branching}")
        if isinstance(instr.op, Call):
            target = instr.op.subprogram
            if not s < target < len(self.subprograms):
                raise ValueError(
                    f"{where} calls subprogram {target}; calls must go to a "
                    f"higher existing index")
        elif not isinstance(instr.op, (PrimitiveOp, PassThrough)):
            raise ValueError(f"{where} has unknown op {instr.op!r}")

    @property
    def main(self) -> Subprogram:
        return self.subprograms[0]

    def with_subprogram(self, s: int, sub: Subprogram) -> 'Dna':
        subs = list(self.subprograms)
        subs[s] = sub
        return dataclasses.replace(self, subprograms=tuple(subs))

    def with_subprograms(self, subs: Sequence[Subprogram]) -> 'Dna':
        return dataclasses.replace(self, subprograms=tuple(subs))

    def with_constant(self, idx: int, value: float) -> 'Dna':
        constants = list(self.constants)
        constants[idx] = value
        return dataclasses.replace(self, constants=tuple(constants))

    def with_dim(self, idx: int, value: int) -> 'Dna':
        dims = list(self.dims)
        dims[idx] = value
        return dataclasses.replace(self, dims=tuple(dims))

    def with_metadata(self, **changes) -> 'Dna':
        return dataclasses.replace(self,
                                   metadata=dataclasses.replace(
                                       self.metadata, **changes))

    def structurally_equal(self, other: 'Dna') -> bool:
        return (self.subprograms == other.subprograms
                and self.constants == other.constants
                and self.dims == other.dims)

    def num_instructions(self) -> int:
        return sum(len(sub) for sub in self.subprograms)
