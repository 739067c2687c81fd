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

"""Named edits of the seed programs.

Every flag rewrites whole subprograms of the ten-subprogram seed layout (see
``library``), so applying a flag twice gives the same program as applying it
once. Flags that touch different subprograms commute; where two flags
rewrite the same subprogram the later one wins.
"""

import enum
import logging
from typing import Dict, Iterable, List, Sequence

from ..errors import ModificationNotApplicable
from ..layers.primitives import PrimitiveOp as P
from ..program.dna import Dna, Instruction, Subprogram

__all__ = [
    'ModificationFlag', 'apply_modification', 'apply_modifications',
    'PRIMER_FLAGS', 'GELU_SIGMOID_SCALE', 'parse_flags'
]

logger = logging.getLogger(__name__)

# x * sigmoid(1.702 x) approximates GELU with one bank constant
GELU_SIGMOID_SCALE = 1.702

BOTTLENECK_FF_DIM = 48
SEED_SUBPROGRAMS = 10


class ModificationFlag(enum.Enum):
    SQUARED_RELU = 0
    MDHA = 1
    SHARED_QK = 2
    PRE_POST_NORM = 3
    CUSTOM_NORM = 4
    BOTTLENECK_12X = 5
    POST_SOFTMAX_SPATIAL_GATING = 6
    GELU = 7
    SWIGLU_PP = 8


PRIMER_FLAGS = (ModificationFlag.SQUARED_RELU, ModificationFlag.MDHA,
                ModificationFlag.SHARED_QK, ModificationFlag.PRE_POST_NORM,
                ModificationFlag.CUSTOM_NORM)


def _i(op, in1: int, in2: int, c: int = 0, d: int = 0, b: int = 1):
    return Instruction.make(op, in1, in2, c, d, b)


def _require_layout(dna: Dna, flag: ModificationFlag):
    if len(dna.subprograms) < SEED_SUBPROGRAMS:
        raise ModificationNotApplicable(
            f"{flag.name} needs the {SEED_SUBPROGRAMS}-subprogram seed "
            f"layout, program has {len(dna.subprograms)}")


def _with_bodies(dna: Dna, bodies: Dict[int, List[Instruction]]) -> Dna:
    subs = list(dna.subprograms)
    for s, body in bodies.items():
        subs[s] = Subprogram(tuple(body))
    return dna.with_subprograms(subs)


def _constant_users(dna: Dna, skip: Sequence[int]) -> set:
    return {
        instr.constant_idx
        for s, sub in enumerate(dna.subprograms) if s not in skip
        for instr in sub.instructions
        if isinstance(instr.op, P) and instr.op.uses_constant
    }


def _constant_slot(dna: Dna, value: float, replaced: Sequence[int],
                   flag: ModificationFlag):
    """Bank index holding ``value``, claiming a slot no surviving
    constant-using instruction reads when the value is missing."""
    if value in dna.constants:
        return dna, dna.constants.index(value)
    used = _constant_users(dna, replaced)
    for idx in range(len(dna.constants)):
        if idx not in used:
            return dna.with_constant(idx, value), idx
    raise ModificationNotApplicable(
        f"{flag.name} needs constant {value} and every bank slot is in use")


def _squared_relu(dna: Dna) -> Dna:
    dna, zero = _constant_slot(dna, 0.0, (9, ),
                               ModificationFlag.SQUARED_RELU)
    return _with_bodies(dna, {9: [_i(P.MAX, 0, 0, c=zero), _i(P.SQUARE, 2,
                                                              2)]})


def _mdha(dna: Dna) -> Dna:
    return _with_bodies(
        dna, {3: [_i(P.CONV_1X1, 0, 0, d=1),
                  _i(P.DCONV_3X1, 2, 2)]})


def _shared_qk(dna: Dna) -> Dna:
    # the query is a learned projection of the key
    return _with_bodies(
        dna, {
            1: [
                _i(3, 0, 0),
                _i(P.CONV_1X1, 2, 2, d=1),
                _i(P.C_MUL, 2, 2, c=1),
                _i(3, 0, 0),
                _i(P.T_MAT_MUL, 4, 3),
                _i(4, 6, 6),
                _i(P.MAT_MUL, 7, 5),
            ]
        })


def _pre_post_norm(dna: Dna) -> Dna:
    main = list(dna.main.instructions)
    heads = main[1].branching if len(main) > 1 and main[1].is_call else 8
    return _with_bodies(
        dna, {
            0: [
                _i(5, 0, 0),
                _i(1, 2, 2, b=heads),
                _i(P.CONV_1X1, 3, 3, d=2),
                _i(8, 0, 4),
                _i(2, 5, 5),
                _i(5, 6, 6),
                _i(8, 5, 7),
            ]
        })


def _custom_norm(dna: Dna) -> Dna:
    return _with_bodies(
        dna, {
            6: [
                _i(P.RED_MEAN, 0, 0),
                _i(P.DIFFERENCE, 0, 2),
                _i(P.MULTIPLY, 3, 0),
                _i(P.RED_MEAN, 4, 4),
                _i(P.ABS_ROOT, 5, 5),
                _i(P.DIVIDE, 3, 6),
            ]
        })


def _bottleneck(dna: Dna) -> Dna:
    # two branches of 48 units: d_ff = 96 units = 12 x d_model
    ff = dna.subprograms[2]
    first = ff.instructions[0]
    if first.op is not P.CONV_1X1:
        raise ModificationNotApplicable(
            "BOTTLENECK_12X needs S2 to open with a DENSE projection")
    dna = dna.with_dim(first.dim_idx, BOTTLENECK_FF_DIM)
    return dna.with_subprogram(
        2, ff.replace_instruction(0, first.replace(branching=2)))


def _spatial_gating(dna: Dna) -> Dna:
    return _with_bodies(
        dna, {
            4: [
                _i(P.EXP, 0, 0),
                _i(P.MASK, 2, 2),
                _i(P.RED_SUM, 3, 3),
                _i(P.DIVIDE, 3, 4),
                _i(P.SCALE, 5, 5),
            ]
        })


def _gelu(dna: Dna) -> Dna:
    dna, scale = _constant_slot(dna, GELU_SIGMOID_SCALE, (9, ),
                                ModificationFlag.GELU)
    return _with_bodies(
        dna, {
            9: [
                _i(P.C_MUL, 0, 0, c=scale),
                _i(P.SIGMOID, 2, 2),
                _i(P.MULTIPLY, 0, 3),
            ]
        })


def _swiglu_pp(dna: Dna) -> Dna:
    # SwiGLU feed forward and a mean-free (RMS style) norm
    return _with_bodies(
        dna, {
            2: [
                _i(P.CONV_1X1, 0, 0, d=3),
                _i(P.CONV_1X1, 0, 0, d=3),
                _i(P.SIGMOID, 3, 3),
                _i(P.MULTIPLY, 3, 4),
                _i(P.MULTIPLY, 2, 5),
                _i(P.CONV_1X1, 6, 6, d=2),
            ],
            6: [
                _i(P.MULTIPLY, 0, 0),
                _i(P.RED_MEAN, 2, 2),
                _i(P.ABS_ROOT, 3, 3),
                _i(P.DIVIDE, 0, 4),
            ],
        })


_TRANSFORMS = {
    ModificationFlag.SQUARED_RELU: _squared_relu,
    ModificationFlag.MDHA: _mdha,
    ModificationFlag.SHARED_QK: _shared_qk,
    ModificationFlag.PRE_POST_NORM: _pre_post_norm,
    ModificationFlag.CUSTOM_NORM: _custom_norm,
    ModificationFlag.BOTTLENECK_12X: _bottleneck,
    ModificationFlag.POST_SOFTMAX_SPATIAL_GATING: _spatial_gating,
    ModificationFlag.GELU: _gelu,
    ModificationFlag.SWIGLU_PP: _swiglu_pp,
}


def apply_modification(dna: Dna,
                       flag: ModificationFlag,
                       variable_seq_len: bool = False) -> Dna:
    """Returns ``dna`` with ``flag`` applied.

    Args:
        dna: a program in the seed layout.
        flag: the edit.
        variable_seq_len: whether the stack will see varying sequence
            lengths; spatial gating learns one gain per key position and
            is rejected then.
    Raises:
        ModificationNotApplicable: the program lacks what the flag edits.
    """
    _require_layout(dna, flag)
    if flag is ModificationFlag.POST_SOFTMAX_SPATIAL_GATING and \
            variable_seq_len:
        raise ModificationNotApplicable(
            "spatial gating needs a fixed sequence length")
    logger.debug("applying %s", flag.name)
    return _TRANSFORMS[flag](dna)


def apply_modifications(dna: Dna,
                        flags: Iterable[ModificationFlag],
                        variable_seq_len: bool = False) -> Dna:
    for flag in flags:
        dna = apply_modification(dna, flag, variable_seq_len)
    return dna


def parse_flags(names: Iterable[str]) -> List[ModificationFlag]:
    flags = []
    for name in names:
        key = name.strip().upper().replace("-", "_")
        if not key:
            continue
        try:
            flags.append(ModificationFlag[key])
        except KeyError:
            raise ValueError(f"unknown modification {name!r}")
    return flags
