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

from .hurdles import HurdleSchedule, build_hurdles, hurdle_gate
from .mutation import MutationKind, Mutation, MAX_ATTEMPTS, random_instruction, apply_mutation, mutate, \
    random_dna, delete_instruction, insert_instruction, swap_instructions
from .population import Individual, Population
from .search import SearchLogEntry, SearchResult, RegularizedEvolution, run_search, proxy_eval_config, \
    LOG_FILE, CHECKPOINT_FILE, TOP_DIR

__all__ = [
    'HurdleSchedule', 'build_hurdles', 'hurdle_gate', 'MutationKind',
    'Mutation', 'MAX_ATTEMPTS', 'random_instruction', 'apply_mutation',
    'mutate', 'random_dna', 'delete_instruction', 'insert_instruction',
    'swap_instructions', 'Individual', 'Population', 'SearchLogEntry',
    'SearchResult', 'RegularizedEvolution', 'run_search',
    'proxy_eval_config', 'LOG_FILE', 'CHECKPOINT_FILE', 'TOP_DIR'
]
