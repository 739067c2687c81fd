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

from .corpus import Corpus, BYTE_VOCAB, VALID_FRACTION
from .schedule import lr_schedule, lr_factor, build_scheduler
from .record import FitnessRecord, CurvePoint, CURVE_COLUMNS, degeneracy_ceiling, write_curve_csv, \
    read_curve_csv
from .trainer import HurdleHook, TrainResult, Trainer, train, next_token_loss
from .fitness import build_model, evaluate_program, evaluate_fitness, measure_inference

__all__ = [
    'Corpus', 'BYTE_VOCAB', 'VALID_FRACTION', 'lr_schedule', 'lr_factor',
    'build_scheduler', 'FitnessRecord', 'CurvePoint', 'CURVE_COLUMNS',
    'degeneracy_ceiling', 'write_curve_csv', 'read_curve_csv', 'HurdleHook',
    'TrainResult', 'Trainer', 'train', 'next_token_loss', 'build_model',
    'evaluate_program', 'evaluate_fitness', 'measure_inference'
]
