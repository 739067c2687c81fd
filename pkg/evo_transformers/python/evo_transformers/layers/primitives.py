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

import enum
from typing import Dict, Optional, Tuple

__all__ = [
    'OpFamily', 'PrimitiveOp', 'LISTING_NAMES', 'op_from_name',
    'listing_name', 'UNARY_OPS', 'BINARY_OPS', 'REDUCTION_OPS',
    'CUMULATIVE_OPS', 'MATMUL_OPS', 'CONV_OPS', 'LEARNED_OPS',
    'CONSTANT_OPS', 'DIM_OPS'
]


class OpFamily(enum.Enum):
    UNARY = 0
    BINARY = 1
    REDUCTION = 2
    CUMULATIVE = 3
    MATMUL = 4
    CONV = 5
    MASK = 6
    LEARNED = 7


class PrimitiveOp(enum.Enum):
    ADD = 0
    DIFFERENCE = 1
    DIVIDE = 2
    MULTIPLY = 3
    ABS_ROOT = 4
    SQUARE = 5
    EXP = 6
    LOG = 7
    C_MUL = 8
    ABS = 9
    RECIP = 10
    SIGN = 11
    COS = 12
    SIN = 13
    TANH = 14
    MAX = 15
    MIN = 16
    SCALE = 17
    SHIFT = 18
    SIGMOID = 19
    MASK = 20
    CUM_PROD = 21
    CUM_SUM = 22
    RED_MEAN = 23
    RED_SUM = 24
    RED_MIN = 25
    RED_MAX = 26
    RED_PROD = 27
    MAT_MUL = 28
    T_MAT_MUL = 29
    CONV_1X1 = 30
    CONV_3X1 = 31
    CONV_7X1 = 32
    CONV_15X1 = 33
    CONV_31X1 = 34
    DCONV_3X1 = 35
    DCONV_7X1 = 36
    DCONV_15X1 = 37
    DCONV_31X1 = 38

    @property
    def family(self) -> OpFamily:
        return _SIGNATURES[self][0]

    @property
    def uses_input2(self) -> bool:
        return _SIGNATURES[self][1]

    @property
    def uses_constant(self) -> bool:
        return _SIGNATURES[self][2]

    @property
    def uses_dim(self) -> bool:
        return _SIGNATURES[self][3]

    @property
    def depthwise(self) -> bool:
        return self.name.startswith("DCONV")

    @property
    def kernel_width(self) -> int:
        if self.family is not OpFamily.CONV:
            raise ValueError(f"{self.name} is not a convolution")
        return int(self.name.split("_")[1].split("X")[0])


_U, _B = OpFamily.UNARY, OpFamily.BINARY

# argument usage: (family, input2, constant, dim)
_SIGNATURES: Dict[PrimitiveOp, Tuple[OpFamily, bool, bool, bool]] = {
    PrimitiveOp.ADD: (_B, True, False, False),
    PrimitiveOp.DIFFERENCE: (_B, True, False, False),
    PrimitiveOp.DIVIDE: (_B, True, False, False),
    PrimitiveOp.MULTIPLY: (_B, True, False, False),
    PrimitiveOp.ABS_ROOT: (_U, False, False, False),
    PrimitiveOp.SQUARE: (_U, False, False, False),
    PrimitiveOp.EXP: (_U, False, False, False),
    PrimitiveOp.LOG: (_U, False, False, False),
    PrimitiveOp.C_MUL: (_U, False, True, False),
    PrimitiveOp.ABS: (_U, False, False, False),
    PrimitiveOp.RECIP: (_U, False, False, False),
    PrimitiveOp.SIGN: (_U, False, False, False),
    PrimitiveOp.COS: (_U, False, False, False),
    PrimitiveOp.SIN: (_U, False, False, False),
    PrimitiveOp.TANH: (_U, False, False, False),
    PrimitiveOp.MAX: (_U, False, True, False),
    PrimitiveOp.MIN: (_U, False, True, False),
    PrimitiveOp.SCALE: (OpFamily.LEARNED, False, False, False),
    PrimitiveOp.SHIFT: (OpFamily.LEARNED, False, False, False),
    PrimitiveOp.SIGMOID: (_U, False, False, False),
    PrimitiveOp.MASK: (OpFamily.MASK, False, False, False),
    PrimitiveOp.CUM_PROD: (OpFamily.CUMULATIVE, False, False, False),
    PrimitiveOp.CUM_SUM: (OpFamily.CUMULATIVE, False, False, False),
    PrimitiveOp.MAT_MUL: (OpFamily.MATMUL, True, False, False),
    PrimitiveOp.T_MAT_MUL: (OpFamily.MATMUL, True, False, False),
}
_SIGNATURES.update({
    op: (OpFamily.REDUCTION, False, False, False)
    for op in PrimitiveOp if op.name.startswith("RED_")
})
_SIGNATURES.update({
    op: (OpFamily.CONV, False, False, not op.name.startswith("DCONV"))
    for op in PrimitiveOp if "CONV" in op.name
})


def _by_family(family: OpFamily) -> Tuple[PrimitiveOp, ...]:
    return tuple(op for op in PrimitiveOp if op.family is family)


UNARY_OPS = _by_family(OpFamily.UNARY)
BINARY_OPS = _by_family(OpFamily.BINARY)
REDUCTION_OPS = _by_family(OpFamily.REDUCTION)
CUMULATIVE_OPS = _by_family(OpFamily.CUMULATIVE)
MATMUL_OPS = _by_family(OpFamily.MATMUL)
CONV_OPS = _by_family(OpFamily.CONV)
LEARNED_OPS = _by_family(OpFamily.LEARNED)
CONSTANT_OPS = tuple(op for op in PrimitiveOp if op.uses_constant)
DIM_OPS = tuple(op for op in PrimitiveOp if op.uses_dim)

# spellings used by instruction listings
LISTING_NAMES: Dict[PrimitiveOp, str] = {
    PrimitiveOp.RED_MEAN: "REDUCE_MEAN",
    PrimitiveOp.RED_SUM: "REDUCE_SUM",
    PrimitiveOp.RED_MIN: "REDUCE_MIN",
    PrimitiveOp.RED_MAX: "REDUCE_MAX",
    PrimitiveOp.RED_PROD: "REDUCE_PROD",
    PrimitiveOp.ABS_ROOT: "ABS_SQUARE_ROOT",
    PrimitiveOp.C_MUL: "CONSTANT_MUL",
    PrimitiveOp.T_MAT_MUL: "TRANSPOSE_MAT_MUL",
    PrimitiveOp.MASK: "EMBEDDING_MASK",
    PrimitiveOp.CUM_PROD: "CUMULATIVE_PROD",
    PrimitiveOp.CUM_SUM: "CUMULATIVE_SUM",
    PrimitiveOp.CONV_1X1: "DENSE",
    PrimitiveOp.DCONV_3X1: "DEPTHWISE_CONV_3X1",
    PrimitiveOp.DCONV_7X1: "DEPTHWISE_CONV_7X1",
    PrimitiveOp.DCONV_15X1: "DEPTHWISE_CONV_15X1",
    PrimitiveOp.DCONV_31X1: "DEPTHWISE_CONV_31X1",
}

_NAME_TO_OP: Dict[str, PrimitiveOp] = {op.name: op for op in PrimitiveOp}
_NAME_TO_OP.update({name: op for op, name in LISTING_NAMES.items()})


def listing_name(op: PrimitiveOp) -> str:
    return LISTING_NAMES.get(op, op.name)


def op_from_name(name: str) -> Optional[PrimitiveOp]:
    return _NAME_TO_OP.get(name.upper())
