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

"""Seed programs.

The Transformer seed is split into ten subprograms along the concepts it is
built from::

    S0 main block       S5 normalization (S6 then S7)
    S1 attention head   S6 z-score
    S2 feed forward     S7 scale and shift
    S3 head projection  S8 residual add
    S4 softmax          S9 activation

Bank layout shared by every seed and modification: constants[0] is the
activation threshold, constants[1] the attention scale; dims[1] is the head
size, dims[2] the model width (8 units, the compile config's
``model_dim_units``) and dims[3] the feed forward width.
"""

from typing import Callable, Dict

from ..layers.primitives import PrimitiveOp as P
from ..program.dna import Dna, Instruction
from .modifications import (PRIMER_FLAGS, ModificationFlag,
                            apply_modification, apply_modifications)

__all__ = [
    'TRANSFORMER_SCALE_UNIT', 'PRIMER_SCALE_UNIT', 'transformer_seed',
    'primer_verbatim', 'primer_ez', 'primer', 'transformer_gelu',
    'transformer_pp', 'SEED_LIBRARY', 'get_seed', 'seed_block_parameters'
]

# unit at which the seeds flatten to their reference listings
TRANSFORMER_SCALE_UNIT = 64
PRIMER_SCALE_UNIT = 48


def _i(op, in1: int, in2: int, c: int = 0, d: int = 0, b: int = 1):
    return Instruction.make(op, in1, in2, c, d, b)


def _transformer_subprograms():
    return [
        # S0: pre-norm block
        [
            _i(5, 0, 0),
            _i(1, 2, 2, b=8),
            _i(P.CONV_1X1, 3, 3, d=2),
            _i(8, 0, 4),
            _i(5, 5, 5),
            _i(2, 6, 6),
            _i(8, 5, 7),
        ],
        # S1: one attention head
        [
            _i(3, 0, 0),
            _i(3, 0, 0),
            _i(P.C_MUL, 3, 3, c=1),
            _i(3, 0, 0),
            _i(P.T_MAT_MUL, 4, 2),
            _i(4, 6, 6),
            _i(P.MAT_MUL, 7, 5),
        ],
        # S2
        [
            _i(P.CONV_1X1, 0, 0, d=3),
            _i(P.SHIFT, 2, 2),
            _i(9, 3, 3),
            _i(P.CONV_1X1, 4, 4, d=2),
            _i(P.SHIFT, 5, 5),
        ],
        [_i(P.CONV_1X1, 0, 0, d=1)],
        # S4: masked softmax
        [
            _i(P.EXP, 0, 0),
            _i(P.MASK, 2, 2),
            _i(P.RED_SUM, 3, 3),
            _i(P.DIVIDE, 3, 4),
        ],
        [_i(6, 0, 0), _i(7, 2, 2)],
        [
            _i(P.RED_MEAN, 0, 0),
            _i(P.DIFFERENCE, 0, 2),
            _i(P.MULTIPLY, 3, 3),
            _i(P.RED_MEAN, 4, 4),
            _i(P.ABS_ROOT, 5, 5),
            _i(P.DIVIDE, 3, 6),
        ],
        [_i(P.SCALE, 0, 0), _i(P.SHIFT, 2, 2)],
        [_i(P.ADD, 0, 1)],
        # S9: ReLU
        [_i(P.MAX, 0, 0, c=0)],
    ]


def transformer_seed() -> Dna:
    """Pre-norm decoder block: 8 heads of size 64 at d_model 512, d_ff 2048
    at scale unit 64."""
    return Dna.from_lists(_transformer_subprograms(), [0.0, 0.125],
                          [2, 1, 8, 32, 4, 16])


def primer_verbatim() -> Dna:
    """The searched Primer block as found, extraneous instructions included.

    At scale unit 48 it has d_model 384, heads of size 48 and a feed forward
    width of 4608 from two 2304-wide branches.
    """
    subprograms = [
        [
            _i(5, 0, 0),
            _i(1, 2, 2, b=8),
            _i(P.CONV_1X1, 3, 3, d=2),
            _i(8, 0, 4),
            _i(2, 5, 5),
            _i(8, 5, 6),
        ],
        [
            _i(3, 0, 0),
            _i(3, 1, 0),
            _i(P.CONV_1X1, 3, 1, d=1),
            _i(3, 0, 0),
            _i(P.T_MAT_MUL, 4, 3),
            _i(4, 6, 6),
            _i(P.TANH, 7, 6, d=2),
            _i(P.SCALE, 8, 3, d=2),
            _i(P.MAT_MUL, 9, 5),
        ],
        [
            _i(P.CONV_1X1, 0, 0, d=3, b=2),
            _i(P.SHIFT, 2, 2),
            _i(9, 3, 3),
            _i(P.CONV_1X1, 4, 4, d=2),
            _i(5, 5, 5),
        ],
        [
            _i(P.MAX, 0, 0, c=1),
            _i(P.CONV_1X1, 1, 1, d=1),
            _i(P.DCONV_3X1, 3, 1, d=2),
            _i(P.C_MUL, 4, 4, d=2),
        ],
        [
            _i(P.EXP, 0, 0),
            _i(P.MASK, 2, 2),
            _i(P.RED_SUM, 3, 3),
            _i(P.DIVIDE, 3, 4),
        ],
        [_i(6, 0, 0), _i(7, 2, 2)],
        [
            _i(P.RED_MEAN, 0, 0),
            _i(P.DIFFERENCE, 0, 2),
            _i(P.MULTIPLY, 3, 0),
            _i(P.RED_MEAN, 4, 4),
            _i(P.ABS_ROOT, 5, 5),
            _i(P.DIVIDE, 3, 6),
        ],
        [_i(P.SCALE, 0, 0), _i(P.SHIFT, 2, 2, c=1, d=2)],
        [_i(P.ADD, 0, 1), _i(P.ADD, 2, 1)],
        [_i(P.MAX, 0, 0, c=1), _i(P.SQUARE, 2, 0)],
    ]
    return Dna.from_lists(subprograms, [-1.12, -0.57], [16, 1, 8, 48, 2, 4])


def primer_ez() -> Dna:
    """Transformer seed with squared ReLU and depthwise convolved heads."""
    subprograms = _transformer_subprograms()
    subprograms[3] = [_i(P.CONV_1X1, 0, 0, d=1), _i(P.DCONV_3X1, 2, 2)]
    subprograms[9] = [_i(P.MAX, 0, 0, c=0), _i(P.SQUARE, 2, 2)]
    return Dna.from_lists(subprograms, [0.0, 0.125], [2, 1, 8, 32, 4, 16])


def primer() -> Dna:
    return apply_modifications(transformer_seed(), PRIMER_FLAGS)


def transformer_gelu() -> Dna:
    return apply_modification(transformer_seed(), ModificationFlag.GELU)


def transformer_pp() -> Dna:
    return apply_modification(transformer_seed(), ModificationFlag.SWIGLU_PP)


SEED_LIBRARY: Dict[str, Callable[[], Dna]] = {
    "transformer": transformer_seed,
    "primer": primer,
    "primer_ez": primer_ez,
    "primer_verbatim": primer_verbatim,
    "transformer_gelu": transformer_gelu,
    "transformer_pp": transformer_pp,
}


def get_seed(name: str) -> Dna:
    factory = SEED_LIBRARY.get(name)
    if factory is None:
        raise ValueError(f"unknown seed {name!r}; known seeds are "
                         f"{sorted(SEED_LIBRARY)}")
    return factory()


def seed_block_parameters(d_model: int, d_ff: int) -> int:
    """Parameter count of one Transformer seed block.

    Attention holds four dense layers with bias, the feed forward two dense
    layers each followed by a SHIFT, and each of the two norms a gain and a
    bias: 4 d^2 + 2 d d_ff + 10 d + 2 d_ff.
    """
    return 4 * d_model * d_model + 2 * d_model * d_ff + 10 * d_model + \
        2 * d_ff
