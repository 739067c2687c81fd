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
"""Forward kernels for every primitive of the instruction vocabulary.

All tensors are float64 and rank 3, laid out as [batch, seq, channel]. Attention
maps are rank 3 as well, [batch, seq, seq]. Kernels are pure functions of their
arguments; learned state arrives through a parameter dict.
"""

import math
from typing import Dict, Optional, Tuple

import torch
import torch.nn.functional as F

from ..errors import InvalidDimension, NumericOverflow, ShapeMismatch
from .primitives import OpFamily, PrimitiveOp

__all__ = [
    'DTYPE', 'LOG_FLOOR', 'EXP_CEILING', 'make_tensor', 'apply_unary',
    'apply_binary', 'apply_reduction', 'apply_cumulative', 'matmul_pair',
    'conv_spatial', 'apply_mask', 'band_lower', 'apply_learned',
    'adapt_channels', 'parameter_shapes', 'init_parameters', 'check_finite'
]

DTYPE = torch.float64
LOG_FLOOR = 1e-12
EXP_CEILING = 80.0


def make_tensor(data) -> torch.Tensor:
    t = torch.as_tensor(data, dtype=DTYPE)
    if t.dim() != 3:
        raise ShapeMismatch(f"expected a rank 3 tensor, got shape {tuple(t.shape)}")
    if not bool(torch.isfinite(t).all()):
        raise ValueError("tensor holds non-finite values")
    return t


def check_finite(op: str, out: torch.Tensor,
                 node: Optional[int] = None) -> torch.Tensor:
    if not bool(torch.isfinite(out).all()):
        raise NumericOverflow(op, node)
    return out


def _safe_where_zero(x: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    # the substituted ones keep the unselected branch (and its gradient) finite
    zero = x == 0
    return zero, torch.where(zero, torch.ones_like(x), x)


def apply_unary(op: PrimitiveOp,
                x: torch.Tensor,
                constant: float = 0.0,
                guard: bool = True) -> torch.Tensor:
    if op.family is not OpFamily.UNARY:
        raise ShapeMismatch(f"{op.name} is not a unary op")
    if op is PrimitiveOp.ABS_ROOT:
        a = torch.abs(x)
        if guard:
            zero, safe = _safe_where_zero(a)
            out = torch.where(zero, torch.zeros_like(a), torch.sqrt(safe))
        else:
            out = torch.sqrt(a)
    elif op is PrimitiveOp.SQUARE:
        out = x * x
    elif op is PrimitiveOp.EXP:
        out = torch.exp(torch.clamp(x, max=EXP_CEILING) if guard else x)
    elif op is PrimitiveOp.LOG:
        a = torch.abs(x)
        out = torch.log(torch.clamp(a, min=LOG_FLOOR) if guard else a)
    elif op is PrimitiveOp.C_MUL:
        out = constant * x
    elif op is PrimitiveOp.ABS:
        out = torch.abs(x)
    elif op is PrimitiveOp.RECIP:
        if guard:
            zero, safe = _safe_where_zero(x)
            out = torch.where(zero, torch.zeros_like(x), 1.0 / safe)
        else:
            out = 1.0 / x
    elif op is PrimitiveOp.SIGN:
        out = torch.sign(x)
    elif op is PrimitiveOp.COS:
        out = torch.cos(x)
    elif op is PrimitiveOp.SIN:
        out = torch.sin(x)
    elif op is PrimitiveOp.TANH:
        out = torch.tanh(x)
    elif op is PrimitiveOp.MAX:
        # strict comparison: gradient is indicator(x > C)
        out = torch.where(x > constant, x, torch.full_like(x, constant))
    elif op is PrimitiveOp.MIN:
        out = torch.where(x < constant, x, torch.full_like(x, constant))
    elif op is PrimitiveOp.SIGMOID:
        out = torch.sigmoid(x)
    else:
        raise ShapeMismatch(f"no unary kernel for {op.name}")
    return check_finite(op.name, out)


def _check_binary_shapes(x: torch.Tensor, y: torch.Tensor):
    if x.shape == y.shape:
        return
    if x.shape[:-1] == y.shape[:-1] and y.shape[-1] == 1:
        return
    raise ShapeMismatch(
        f"binary operands {tuple(x.shape)} and {tuple(y.shape)} are incompatible")


def apply_binary(op: PrimitiveOp,
                 x: torch.Tensor,
                 y: torch.Tensor,
                 guard: bool = True) -> torch.Tensor:
    _check_binary_shapes(x, y)
    if op is PrimitiveOp.ADD:
        out = x + y
    elif op is PrimitiveOp.DIFFERENCE:
        out = x - y
    elif op is PrimitiveOp.MULTIPLY:
        out = x * y
    elif op is PrimitiveOp.DIVIDE:
        if guard:
            zero, safe = _safe_where_zero(y)
            out = torch.where(zero, torch.zeros_like(x), x / safe)
        else:
            out = x / y
    else:
        raise ShapeMismatch(f"{op.name} is not a binary op")
    return check_finite(op.name, out)


def apply_reduction(op: PrimitiveOp, x: torch.Tensor) -> torch.Tensor:
    if op is PrimitiveOp.RED_MEAN:
        out = torch.mean(x, dim=-1, keepdim=True)
    elif op is PrimitiveOp.RED_SUM:
        out = torch.sum(x, dim=-1, keepdim=True)
    elif op is PrimitiveOp.RED_MIN:
        out = torch.amin(x, dim=-1, keepdim=True)
    elif op is PrimitiveOp.RED_MAX:
        out = torch.amax(x, dim=-1, keepdim=True)
    elif op is PrimitiveOp.RED_PROD:
        out = torch.prod(x, dim=-1, keepdim=True)
    else:
        raise ShapeMismatch(f"{op.name} is not a reduction")
    return check_finite(op.name, out)


def apply_cumulative(op: PrimitiveOp, x: torch.Tensor) -> torch.Tensor:
    if op is PrimitiveOp.CUM_SUM:
        out = torch.cumsum(x, dim=1)
    elif op is PrimitiveOp.CUM_PROD:
        out = torch.cumprod(x, dim=1)
    else:
        raise ShapeMismatch(f"{op.name} is not a cumulative op")
    return check_finite(op.name, out)


def matmul_pair(op: PrimitiveOp, a: torch.Tensor,
                b: torch.Tensor) -> torch.Tensor:
    if op is PrimitiveOp.T_MAT_MUL:
        if a.shape[0] != b.shape[0] or a.shape[-1] != b.shape[-1]:
            raise ShapeMismatch(
                f"T_MAT_MUL operands {tuple(a.shape)} and {tuple(b.shape)}")
        out = torch.matmul(a, b.transpose(1, 2))
    elif op is PrimitiveOp.MAT_MUL:
        if a.shape[0] != b.shape[0] or a.shape[-1] != b.shape[1]:
            raise ShapeMismatch(
                f"MAT_MUL inner dims {tuple(a.shape)} x {tuple(b.shape)}")
        out = torch.matmul(a, b)
    else:
        raise ShapeMismatch(f"{op.name} is not a matmul")
    return check_finite(op.name, out)


def _pad_sequence(xt: torch.Tensor, k: int, causal: bool) -> torch.Tensor:
    # xt is [batch, channel, seq]
    if causal:
        return F.pad(xt, (k - 1, 0))
    left = (k - 1) // 2
    return F.pad(xt, (left, k - 1 - left))


def conv_spatial(op: PrimitiveOp,
                 x: torch.Tensor,
                 out_channels: int,
                 params: Dict[str, torch.Tensor],
                 causal: bool = True) -> torch.Tensor:
    """Convolution family.

    Args:
        op: CONV_1X1, CONV_kX1 or DCONV_kX1.
        x: [batch, seq, in_channels].
        out_channels: output width; ignored by depthwise ops.
        params: 'weight' (and 'bias' for the non-depthwise ops).
        causal: left pad by k - 1 so position i only sees positions <= i.
    Returns:
        [batch, seq, out_channels].
    """
    if out_channels <= 0:
        raise InvalidDimension(f"{op.name} with out_channels {out_channels}")
    if op.family is not OpFamily.CONV:
        raise ShapeMismatch(f"{op.name} is not a convolution")
    weight = params["weight"]
    if op is PrimitiveOp.CONV_1X1:
        if weight.shape[0] != x.shape[-1]:
            raise ShapeMismatch(
                f"dense weight {tuple(weight.shape)} on width {x.shape[-1]}")
        out = torch.matmul(x, weight) + params["bias"]
        return check_finite(op.name, out)

    k = op.kernel_width
    xt = _pad_sequence(x.transpose(1, 2), k, causal)
    if op.depthwise:
        channels = x.shape[-1]
        if weight.shape[0] != channels:
            raise ShapeMismatch(
                f"depthwise weight {tuple(weight.shape)} on width {channels}")
        out = F.conv1d(xt, weight, groups=channels)
    else:
        if weight.shape[1] != x.shape[-1]:
            raise ShapeMismatch(
                f"conv weight {tuple(weight.shape)} on width {x.shape[-1]}")
        out = F.conv1d(xt, weight, params["bias"])
    return check_finite(op.name, out.transpose(1, 2))


def band_lower(x: torch.Tensor) -> torch.Tensor:
    """Zeroes entries whose column index exceeds the row index.

    Channels past the sequence length wrap around (column mod seq), so a
    width that is a multiple of seq is masked as stacked square maps.
    """
    seq, width = x.shape[-2], x.shape[-1]
    if seq == width:
        return torch.tril(x)
    rows = torch.arange(seq, device=x.device).unsqueeze(-1)
    cols = torch.arange(width, device=x.device).unsqueeze(0) % seq
    return torch.where(cols <= rows, x, torch.zeros_like(x))


def apply_mask(x: torch.Tensor) -> torch.Tensor:
    if x.shape[-1] != x.shape[-2]:
        raise ShapeMismatch(
            f"mask needs square trailing axes, got {tuple(x.shape)}")
    return band_lower(x)


def apply_learned(op: PrimitiveOp, x: torch.Tensor,
                  params: Dict[str, torch.Tensor]) -> torch.Tensor:
    if op is PrimitiveOp.SCALE:
        vector = params["gain"]
    elif op is PrimitiveOp.SHIFT:
        vector = params["bias"]
    else:
        raise ShapeMismatch(f"{op.name} holds no learned vector")
    if vector.shape[-1] != x.shape[-1]:
        raise ShapeMismatch(
            f"{op.name} vector width {vector.shape[-1]} on width {x.shape[-1]}")
    out = x * vector if op is PrimitiveOp.SCALE else x + vector
    return check_finite(op.name, out)


def adapt_channels(x: torch.Tensor, width: int) -> torch.Tensor:
    """Truncates, or tiles cyclically, the channel axis to `width`."""
    current = x.shape[-1]
    if width == current:
        return x
    if width < current:
        return x[..., :width]
    index = torch.arange(width, device=x.device) % current
    return x.index_select(-1, index)


def parameter_shapes(op: PrimitiveOp, in_width: int,
                     out_width: int) -> Dict[str, Tuple[int, ...]]:
    if op is PrimitiveOp.SCALE:
        return {"gain": (in_width, )}
    if op is PrimitiveOp.SHIFT:
        return {"bias": (in_width, )}
    if op is PrimitiveOp.CONV_1X1:
        return {"weight": (in_width, out_width), "bias": (out_width, )}
    if op.family is OpFamily.CONV:
        k = op.kernel_width
        if op.depthwise:
            return {"weight": (in_width, 1, k)}
        return {"weight": (out_width, in_width, k), "bias": (out_width, )}
    return {}


def init_parameters(op: PrimitiveOp, in_width: int, out_width: int,
                    generator: torch.Generator) -> Dict[str, torch.Tensor]:
    shapes = parameter_shapes(op, in_width, out_width)
    params = {}
    for name, shape in shapes.items():
        if name == "gain":
            t = torch.ones(shape, dtype=DTYPE)
        elif name == "bias":
            t = torch.zeros(shape, dtype=DTYPE)
        elif op.depthwise:
            t = torch.zeros(shape, dtype=DTYPE)
            t.normal_(0.0, 0.01, generator=generator)
            t[:, 0, -1] += 1.0
        else:
            fan_in = in_width * (1 if op is PrimitiveOp.CONV_1X1 else
                                 op.kernel_width)
            std = 1.0 / math.sqrt(fan_in)
            t = torch.empty(shape, dtype=DTYPE)
            torch.nn.init.trunc_normal_(t,
                                        std=std,
                                        a=-2.0 * std,
                                        b=2.0 * std,
                                        generator=generator)
        params[name] = t
    return params
