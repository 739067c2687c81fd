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

"""Activation and normalization functions of the seed programs, written with
the same kernels the compiled programs run."""

import enum
import math
from typing import Dict, Optional

import torch

from ..errors import ContractViolation
from . import kernels
from .primitives import PrimitiveOp

__all__ = [
    'ActivationKind', 'squared_relu', 'gelu_approx', 'swish', 'activation',
    'layer_norm', 'custom_norm', 'mdha_projection', 'init_mdha_parameters'
]


class ActivationKind(enum.Enum):
    RELU = 0
    SQUARED_RELU = 1
    GELU_APPROX = 2
    SWISH = 3
    REGLU = 4
    SWIGLU = 5


_GLU_KINDS = (ActivationKind.REGLU, ActivationKind.SWIGLU)


def _relu(x: torch.Tensor) -> torch.Tensor:
    return kernels.apply_unary(PrimitiveOp.MAX, x, 0.0)


def squared_relu(x: torch.Tensor) -> torch.Tensor:
    return kernels.apply_unary(PrimitiveOp.SQUARE, _relu(x))


def gelu_approx(x: torch.Tensor) -> torch.Tensor:
    inner = math.sqrt(2.0 / math.pi) * (x + 0.044715 * x * x * x)
    return 0.5 * x * (1.0 + torch.tanh(inner))


def swish(x: torch.Tensor) -> torch.Tensor:
    return x * torch.sigmoid(x)


def activation(kind: ActivationKind,
               x: torch.Tensor,
               u: Optional[torch.Tensor] = None,
               v: Optional[torch.Tensor] = None) -> torch.Tensor:
    """Applies one member of the activation zoo.

    Args:
        kind: which activation.
        x: [..., channels].
        u, v: [channels, out] weight matrices, required by the gated
            kinds: REGLU is (x u) * max(x v, 0), SWIGLU is (x u) * swish(x v).
    """
    if kind in _GLU_KINDS:
        if u is None or v is None:
            raise ContractViolation(f"{kind.name} needs both U and V")
        gate = torch.matmul(x, v)
        gate = _relu(gate) if kind is ActivationKind.REGLU else swish(gate)
        return torch.matmul(x, u) * gate
    if kind is ActivationKind.RELU:
        return _relu(x)
    if kind is ActivationKind.SQUARED_RELU:
        return squared_relu(x)
    if kind is ActivationKind.GELU_APPROX:
        return gelu_approx(x)
    if kind is ActivationKind.SWISH:
        return swish(x)
    raise ContractViolation(f"unknown activation {kind}")


def _normalize(x: torch.Tensor, custom: bool) -> torch.Tensor:
    mean = kernels.apply_reduction(PrimitiveOp.RED_MEAN, x)
    centered = kernels.apply_binary(PrimitiveOp.DIFFERENCE, x, mean)
    spread = kernels.apply_binary(PrimitiveOp.MULTIPLY, centered,
                                  x if custom else centered)
    variance = kernels.apply_reduction(PrimitiveOp.RED_MEAN, spread)
    root = kernels.apply_unary(PrimitiveOp.ABS_ROOT, variance)
    return kernels.apply_binary(PrimitiveOp.DIVIDE, centered, root)


def layer_norm(x: torch.Tensor) -> torch.Tensor:
    """z-score over channels; constant rows map to 0."""
    return _normalize(x, custom=False)


def custom_norm(x: torch.Tensor) -> torch.Tensor:
    """Like layer_norm with mean((x - mu) * x) as the variance term."""
    return _normalize(x, custom=True)


def init_mdha_parameters(in_width: int, head_size: int,
                         generator: torch.Generator
                         ) -> Dict[str, torch.Tensor]:
    dense = kernels.init_parameters(PrimitiveOp.CONV_1X1, in_width,
                                    head_size, generator)
    dconv = kernels.init_parameters(PrimitiveOp.DCONV_3X1, head_size,
                                    head_size, generator)
    return {
        "dense_weight": dense["weight"],
        "dense_bias": dense["bias"],
        "dconv_weight": dconv["weight"],
    }


def mdha_projection(x: torch.Tensor,
                    head_size: int,
                    params: Optional[Dict[str, torch.Tensor]] = None,
                    generator: Optional[torch.Generator] = None
                    ) -> torch.Tensor:
    """Dense projection to ``head_size`` followed by a causal width 3
    depthwise convolution over the sequence.

    Args:
        x: [batch, seq, channels].
        head_size: projected width, >= 1.
        params: ``dense_weight``, ``dense_bias`` and ``dconv_weight``;
            initialized from ``generator`` when omitted.
    """
    if head_size < 1:
        raise ValueError(f"head_size must be >= 1, got {head_size}")
    if params is None:
        params = init_mdha_parameters(x.shape[-1], head_size, generator
                                      or torch.Generator().manual_seed(0))
    y = kernels.conv_spatial(PrimitiveOp.CONV_1X1, x, head_size, {
        "weight": params["dense_weight"],
        "bias": params["dense_bias"]
    })
    return kernels.conv_spatial(PrimitiveOp.DCONV_3X1, y, head_size,
                                {"weight": params["dconv_weight"]})
