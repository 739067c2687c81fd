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


from .modifications import ModificationFlag, apply_modification, apply_modifications, PRIMER_FLAGS, parse_flags
from .library import TRANSFORMER_SCALE_UNIT, PRIMER_SCALE_UNIT, transformer_seed, primer_verbatim, primer_ez, \
    primer, transformer_gelu, transformer_pp, SEED_LIBRARY, get_seed, seed_block_parameters

__all__ = [
    'ModificationFlag', 'apply_modification', 'apply_modifications',
    'PRIMER_FLAGS', 'parse_flags', 'TRANSFORMER_SCALE_UNIT',
    'PRIMER_SCALE_UNIT', 'transformer_seed', 'primer_verbatim', 'primer_ez',
    'primer', 'transformer_gelu', 'transformer_pp', 'SEED_LIBRARY',
    'get_seed', 'seed_block_parameters'
]
