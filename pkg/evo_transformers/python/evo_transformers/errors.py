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

from typing import Optional

__all__ = [
    'EvoTransformersError', 'ContractViolation', 'ShapeMismatch',
    'NumericOverflow', 'ParseError', 'CompileError', 'InvalidDimension',
    'ResizeFailure', 'ModificationNotApplicable', 'InvalidSchedule',
    'MutationStall', 'InvalidData', 'NotReached', 'AssumptionViolated'
]


class EvoTransformersError(Exception):
    pass


class ContractViolation(EvoTransformersError):
    """An internal invariant was broken. Reaching this is a bug, not bad input."""


class ShapeMismatch(ContractViolation):
    pass


class NumericOverflow(EvoTransformersError):
    def __init__(self, op: str, node: Optional[int] = None, detail: str = ""):
        self.op = op
        self.node = node
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"non-finite output from {op}{where} {detail}".strip())


class ParseError(EvoTransformersError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CompileError(EvoTransformersError):
    def __init__(self, message: str, site: Optional[str] = None):
        self.site = site
        if site is not None:
            message = f"{site}: {message}"
        super().__init__(message)


class InvalidDimension(CompileError):
    pass


class ResizeFailure(EvoTransformersError):
    def __init__(self, lower_count: int, upper_count: int, min_params: int,
                 max_params: int):
        self.lower_count = lower_count
        self.upper_count = upper_count
        super().__init__(
            f"no scale unit lands in [{min_params}, {max_params}]: "
            f"bracketing counts {lower_count} and {upper_count}")


class ModificationNotApplicable(EvoTransformersError):
    pass


class InvalidSchedule(EvoTransformersError):
    pass


class MutationStall(EvoTransformersError):
    pass


class InvalidData(EvoTransformersError):
    pass


class NotReached(EvoTransformersError):
    def __init__(self, target: float, best_loss: float):
        self.target = target
        self.best_loss = best_loss
        super().__init__(
            f"treatment never reaches loss {target:.6g}; best {best_loss:.6g}")


class AssumptionViolated(EvoTransformersError):
    pass
