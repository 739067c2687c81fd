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
"""Mutation operators over Dna.

A mutation class is drawn uniformly from the six below and every choice inside
it is uniform over the valid range. ``mutate`` keeps mutating while the child
compiles to a graph hash-equal to the parent's.
"""

import dataclasses
import enum
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..config import BRANCHING_VALUES, DIMS_VOCABULARY, NUM_CONSTANTS, \
    NUM_DIMS, CompileConfig
from ..compiler.hashing import canonical_hash
from ..errors import CompileError, MutationStall
from ..layers.primitives import PrimitiveOp
from ..program.dna import IDENTITY, Call, Dna, DnaMetadata, Instruction, \
    Subprogram

__all__ = [
    'MutationKind', 'Mutation', 'MAX_ATTEMPTS', 'random_instruction',
    'apply_mutation', 'mutate', 'random_dna', 'delete_instruction',
    'insert_instruction', 'swap_instructions'
]

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 20

_PRIMITIVES = tuple(PrimitiveOp)
_FIELDS = ("op", "input1", "input2", "constant_idx", "dim_idx", "branching")


class MutationKind(enum.Enum):
    DELETE = 0
    INSERT = 1
    DELETE_AND_INSERT = 2
    MUTATE_FIELD = 3
    SWAP = 4
    MUTATE_BANK = 5


@dataclasses.dataclass(frozen=True)
class Mutation:
    kind: MutationKind
    detail: str

    def __str__(self):
        return f"{self.kind.name}({self.detail})"


def _uniform(rng: np.random.Generator, n: int) -> int:
    return int(rng.integers(n))


def _random_op(rng: np.random.Generator, s: int, n_subprograms: int):
    callable_subs = n_subprograms - s - 1
    pick = _uniform(rng, len(_PRIMITIVES) + callable_subs)
    if pick < len(_PRIMITIVES):
        return _PRIMITIVES[pick]
    return Call(s + 1 + pick - len(_PRIMITIVES))


def random_instruction(rng: np.random.Generator, s: int, position: int,
                       n_subprograms: int) -> Instruction:
    """Instruction for slot ``position`` of subprogram ``s``; inputs range
    over the states written before it."""
    states = position + 2
    return Instruction(_random_op(rng, s, n_subprograms),
                       _uniform(rng, states), _uniform(rng, states),
                       _uniform(rng, NUM_CONSTANTS), _uniform(rng, NUM_DIMS),
                       BRANCHING_VALUES[_uniform(rng, len(BRANCHING_VALUES))])


def delete_instruction(sub: Subprogram, k: int) -> Subprogram:
    """Removes instruction ``k``; readers of its state read its input1."""
    removed = sub.instructions[k]
    if len(sub) == 1:
        return Subprogram((Instruction(IDENTITY, 0, 0), ))
    state = k + 2

    def rewire(i: int) -> int:
        if i == state:
            return removed.input1
        return i - 1 if i > state else i

    body = [
        instr if j < k else instr.replace(input1=rewire(instr.input1),
                                          input2=rewire(instr.input2))
        for j, instr in enumerate(sub.instructions) if j != k
    ]
    return Subprogram(tuple(body))


def insert_instruction(sub: Subprogram, position: int,
                       instr: Instruction) -> Subprogram:
    """Inserts ``instr`` before slot ``position``; later reads shift."""
    state = position + 2

    def shift(i: int) -> int:
        return i + 1 if i >= state else i

    body = list(sub.instructions[:position]) + [instr] + [
        old.replace(input1=shift(old.input1), input2=shift(old.input2))
        for old in sub.instructions[position:]
    ]
    return Subprogram(tuple(body))


def swap_instructions(sub: Subprogram, a: int, b: int) -> Subprogram:
    """Exchanges everything but the input wiring of slots ``a`` and ``b``.

    The input wiring stays at the positions: each slot keeps the inputs it
    read before and now applies the other slot's op, constant, dim and
    branching to them.
    """
    first, second = sub.instructions[a], sub.instructions[b]

    def take(target: Instruction, source: Instruction) -> Instruction:
        return target.replace(op=source.op,
                              constant_idx=source.constant_idx,
                              dim_idx=source.dim_idx,
                              branching=source.branching)

    body = list(sub.instructions)
    body[a], body[b] = take(first, second), take(second, first)
    return Subprogram(tuple(body))


def _delete(dna: Dna, rng) -> Tuple[Dna, str]:
    s = _uniform(rng, len(dna.subprograms))
    k = _uniform(rng, len(dna.subprograms[s]))
    return dna.with_subprogram(s, delete_instruction(dna.subprograms[s],
                                                     k)), f"s{s}.{k + 2}"


def _insert(dna: Dna, rng) -> Tuple[Dna, str]:
    s = _uniform(rng, len(dna.subprograms))
    sub = dna.subprograms[s]
    if len(sub) == 1 and sub.instructions[0].op is IDENTITY:
        # the placeholder left by a delete is replaced, not kept
        sub = Subprogram(())
    position = _uniform(rng, len(sub) + 1)
    instr = random_instruction(rng, s, position, len(dna.subprograms))
    return dna.with_subprogram(s, insert_instruction(
        sub, position, instr)), f"s{s}.{position + 2}"


def _delete_and_insert(dna: Dna, rng) -> Tuple[Dna, str]:
    dna, deleted = _delete(dna, rng)
    dna, inserted = _insert(dna, rng)
    return dna, f"{deleted}+{inserted}"


def _mutate_field(dna: Dna, rng) -> Tuple[Dna, str]:
    s = _uniform(rng, len(dna.subprograms))
    k = _uniform(rng, len(dna.subprograms[s]))
    instr = dna.subprograms[s][k]
    field = _FIELDS[_uniform(rng, len(_FIELDS))]
    if field == "op":
        value = _random_op(rng, s, len(dna.subprograms))
    elif field in ("input1", "input2"):
        value = _uniform(rng, k + 2)
    elif field == "constant_idx":
        value = _uniform(rng, NUM_CONSTANTS)
    elif field == "dim_idx":
        value = _uniform(rng, NUM_DIMS)
    else:
        value = BRANCHING_VALUES[_uniform(rng, len(BRANCHING_VALUES))]
    sub = dna.subprograms[s].replace_instruction(k,
                                                 instr.replace(**{field: value}))
    return dna.with_subprogram(s, sub), f"s{s}.{k + 2}.{field}"


def _swap(dna: Dna, rng) -> Tuple[Dna, str]:
    s = _uniform(rng, len(dna.subprograms))
    sub = dna.subprograms[s]
    if len(sub) < 2:
        return dna, f"s{s}"
    a, b = (int(i) for i in rng.choice(len(sub), size=2, replace=False))
    return dna.with_subprogram(s, swap_instructions(sub, a,
                                                    b)), f"s{s}.{a + 2}<>{b + 2}"


def _mutate_bank(dna: Dna, rng) -> Tuple[Dna, str]:
    slot = _uniform(rng, NUM_CONSTANTS + NUM_DIMS)
    if slot < NUM_CONSTANTS:
        x, y = rng.standard_normal(2)
        value = dna.constants[slot] * 10.0**x + y
        if not math.isfinite(value):
            value = float(y)
        return dna.with_constant(slot, value), f"c{slot}"
    slot -= NUM_CONSTANTS
    value = DIMS_VOCABULARY[_uniform(rng, len(DIMS_VOCABULARY))]
    return dna.with_dim(slot, value), f"d{slot}"


_OPERATORS = {
    MutationKind.DELETE: _delete,
    MutationKind.INSERT: _insert,
    MutationKind.DELETE_AND_INSERT: _delete_and_insert,
    MutationKind.MUTATE_FIELD: _mutate_field,
    MutationKind.SWAP: _swap,
    MutationKind.MUTATE_BANK: _mutate_bank,
}


def apply_mutation(dna: Dna,
                   rng: np.random.Generator,
                   kind: Optional[MutationKind] = None
                   ) -> Tuple[Dna, Mutation]:
    """One mutation, no equivalence check."""
    if kind is None:
        kind = list(MutationKind)[_uniform(rng, len(MutationKind))]
    child, detail = _OPERATORS[kind](dna, rng)
    return child, Mutation(kind, detail)


def _try_hash(dna: Dna, config: CompileConfig) -> Optional[str]:
    try:
        return canonical_hash(dna, config)
    except CompileError:
        return None


def mutate(parent: Dna,
           rng: np.random.Generator,
           config: Optional[CompileConfig] = None,
           max_attempts: int = MAX_ATTEMPTS) -> Tuple[Dna, List[Mutation]]:
    """Mutates until the child's graph differs from the parent's.

    Programs that do not compile never compare equal, so such children are
    returned as they are and fail later as degenerate candidates.

    Raises:
        MutationStall: ``max_attempts`` mutations in a row were no-ops.
    """
    config = config or CompileConfig()
    parent_hash = _try_hash(parent, config)
    child = parent
    applied: List[Mutation] = []
    for _ in range(max_attempts):
        child, mutation = apply_mutation(child, rng)
        applied.append(mutation)
        child_hash = _try_hash(child, config)
        if parent_hash is None or child_hash is None or \
                child_hash != parent_hash:
            return child, applied
        logger.debug("%s left the graph unchanged, mutating again",
                     mutation)
    raise MutationStall(
        f"{max_attempts} mutations in a row left the graph unchanged")


def random_dna(rng: np.random.Generator,
               length: int,
               n_subprograms: int = 1) -> Dna:
    """A random valid program with ``length`` instructions spread over
    ``n_subprograms`` non-empty subprograms."""
    if length < n_subprograms or n_subprograms < 1:
        raise ValueError(
            f"cannot spread {length} instructions over {n_subprograms} "
            f"subprograms")
    cuts = []
    if n_subprograms > 1:
        cuts = sorted(
            int(c) for c in rng.choice(
                np.arange(1, length), size=n_subprograms - 1, replace=False))
    bounds = [0] + cuts + [length]
    bodies = [[
        random_instruction(rng, s, k, n_subprograms)
        for k in range(bounds[s + 1] - bounds[s])
    ] for s in range(n_subprograms)]
    constants = [float(c) for c in rng.standard_normal(NUM_CONSTANTS)]
    dims = [
        DIMS_VOCABULARY[_uniform(rng, len(DIMS_VOCABULARY))]
        for _ in range(NUM_DIMS)
    ]
    metadata = DnaMetadata(lineage_seed=int(rng.integers(2**31)))
    return Dna.from_lists(bodies, constants, dims, metadata)
