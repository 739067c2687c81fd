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


from .primitives import OpFamily, PrimitiveOp, LISTING_NAMES, op_from_name, listing_name
from .kernels import make_tensor, apply_unary, apply_binary, apply_reduction, apply_cumulative, matmul_pair, \
    conv_spatial, apply_mask, band_lower, apply_learned, adapt_channels
from .autograd import Tape, GradientSet, backward, GradCheckReport, grad_check
from .modeling_block import NodeKind, Node, CompiledGraph
from .modeling_decoder import DecoderStack, build_stack
from .activations import ActivationKind, squared_relu, gelu_approx, swish, activation, layer_norm, custom_norm, \
    mdha_projection
from .utils import try_convert, to_param_dict

__all__ = [
    'OpFamily', 'PrimitiveOp', 'LISTING_NAMES', 'op_from_name',
    'listing_name', 'make_tensor', 'apply_unary', 'apply_binary',
    'apply_reduction', 'apply_cumulative', 'matmul_pair', 'conv_spatial',
    'apply_mask', 'band_lower', 'apply_learned', 'adapt_channels', 'Tape',
    'GradientSet', 'backward', 'GradCheckReport', 'grad_check', 'NodeKind',
    'Node', 'CompiledGraph', 'DecoderStack', 'build_stack', 'ActivationKind',
    'squared_relu', 'gelu_approx', 'swish', 'activation', 'layer_norm',
    'custom_norm', 'mdha_projection', 'try_convert', 'to_param_dict'
]
