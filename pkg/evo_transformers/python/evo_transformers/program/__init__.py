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


from .dna import Call, PassThrough, IDENTITY, Opcode, Instruction, Subprogram, DnaMetadata, Dna, op_label
from .listing import serialize_program, parse_program, parse_canonical, parse_flattened, format_line, \
    opcode_name, load_program, save_program

__all__ = [
    'Call', 'PassThrough', 'IDENTITY', 'Opcode', 'Instruction', 'Subprogram',
    'DnaMetadata', 'Dna', 'op_label', 'serialize_program', 'parse_program',
    'parse_canonical', 'parse_flattened', 'format_line', 'opcode_name',
    'load_program', 'save_program'
]
