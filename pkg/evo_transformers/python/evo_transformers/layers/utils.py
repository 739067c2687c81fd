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


from typing import Dict, Union

import numpy as np
import torch
from torch import nn

from ..errors import ShapeMismatch
from .kernels import DTYPE

__all__ = [
    'try_convert', 'to_param_dict', 'named_tensors', 'check_rank', 'AnyTensor'
]

AnyTensor = Union[np.ndarray, torch.Tensor]


def try_convert(t, dtype: torch.dtype = DTYPE):
    """numpy arrays and nested lists become torch tensors of ``dtype``;
    torch tensors are cast when their dtype differs."""
    if isinstance(t, torch.Tensor):
        return t if t.dtype == dtype else t.to(dtype)
    if isinstance(t, np.ndarray):
        return torch.from_numpy(t).to(dtype)
    if isinstance(t, (list, tuple)):
        return torch.tensor(t, dtype=dtype)
    return t


def to_param_dict(torch_module: nn.Module) -> Dict[str, torch.Tensor]:
    return {k: v for k, v in torch_module.named_parameters()}


def named_tensors(torch_module: nn.Module) -> Dict[str, np.ndarray]:
    """Detached numpy copies of every parameter, for snapshots and tests."""
    return {
        k: v.detach().cpu().numpy().copy()
        for k, v in torch_module.named_parameters()
    }


def check_rank(t: torch.Tensor, rank: int, what: str):
    if t.dim() != rank:
        raise ShapeMismatch(
            f"{what} must have rank {rank}, got shape {tuple(t.shape)}")
