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

from .curves import LossCurve, COMPUTE_COLUMNS
from .power_law import PowerLawFit, SavingsLaw, fit_power_law, frontier_points, savings_from_offset, \
    HUBER_DELTA, PARALLEL_TOLERANCE
from .speedup import Crossing, first_crossing, speedup_factor, speedup_report
from .pareto import ParetoPoint, dominates, pareto_front, read_points_csv
from .report import write_json, write_csv, to_jsonable

__all__ = [
    'LossCurve', 'COMPUTE_COLUMNS', 'PowerLawFit', 'SavingsLaw',
    'fit_power_law', 'frontier_points', 'savings_from_offset', 'HUBER_DELTA',
    'PARALLEL_TOLERANCE', 'Crossing', 'first_crossing', 'speedup_factor',
    'speedup_report', 'ParetoPoint', 'dominates', 'pareto_front',
    'read_points_csv', 'write_json', 'write_csv', 'to_jsonable'
]
